#pragma once

#include <array>
#include <span>
#include <vector>

#include "cfm/problems.hpp"
#include "cfm/regions.hpp"

namespace cfm {

/// 6-point Gauss-Legendre rule mapped to [0,1]; weights sum to 1 and the rule
/// is exact through degree 11.
struct QuadratureRule {
    std::array<double, 6> x;
    std::array<double, 6> w;
};

QuadratureRule gauss_rule();

struct CFOptions {
    double c1 = 1.0;          // Dirichlet penalty
    double c2 = 1.0;          // Neumann penalty
    double cond_limit = 1e14;
    bool use_qr = false;      // rank-revealing QR instead of LDLT
};

/// Normal equations of the weak-form functional on one region:
/// J_p(w) = w^T M w - 2 b^T w + constant.
struct CFSystem {
    int n = 0;
    std::vector<double> M;  // n x n, symmetric
    std::vector<double> b;
    double constant = 0.0;
    double c1 = 1.0, c2 = 1.0, lc = 0.0;
    int owner = -1;  // region's node, for error reporting
};

/// Assembles region systems for a fixed slab height dt and wave speed. The
/// volume-term quadrature rows depend only on (side, dt, c), so their Gram
/// matrix is precomputed once here.
class Assembler {
  public:
    Assembler(int sdim, double side, double dt, double c, CFOptions opts = {});

    CFSystem assemble(const Region& region, const ProblemSpec& problem, double t0) const;

    /// The three terms of J_p (volume, Dirichlet, Neumann) evaluated at w by
    /// direct quadrature; used by scaling diagnostics and tests.
    std::array<double, 3> functional_terms(const Region& region, const ProblemSpec& problem,
                                           double t0, std::span<const double> w) const;

    double dt() const { return dt_; }
    double side() const { return side_; }
    const CFOptions& options() const { return opts_; }

  private:
    struct VolPt {
        double xi, eta, tau, w;
    };

    int sdim_, nd_;
    double side_, dt_, c_, lc_;
    CFOptions opts_;
    QuadratureRule rule_;
    std::vector<VolPt> vol_;
    std::vector<double> vol_rows_;  // wave-operator rows, vol_.size() x nd
    std::vector<double> m_vol_;     // precomputed volume Gram matrix
};

struct SolveInfo {
    double cond = 0.0;
};

/// Minimizer of J_p. Dense symmetric solve with condition monitoring; throws
/// IllConditioned above the configured limit instead of degrading silently.
std::vector<double> solve(const CFSystem& system, const CFOptions& opts = {},
                          SolveInfo* info = nullptr);

/// J_p value at the given weights.
double residual(const CFSystem& system, std::span<const double> w);

/// Per-step correction solves over the whole tiling. The serial variant is the
/// reference; the parallel one maps regions across threads (the solves are
/// independent). Results are identical and deterministically ordered.
std::vector<SpaceTimeInterpolant> solve_regions_serial(const Tiling& tiling,
                                                       const ProblemSpec& problem,
                                                       const Assembler& assembler, double t0,
                                                       std::vector<SolveInfo>* info = nullptr);
std::vector<SpaceTimeInterpolant> solve_regions(const Tiling& tiling, const ProblemSpec& problem,
                                                const Assembler& assembler, double t0, int threads,
                                                std::vector<SolveInfo>* info = nullptr);

}  // namespace cfm
