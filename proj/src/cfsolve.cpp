#include "cfm/cfsolve.hpp"

#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <Eigen/Dense>

#include "cfm/errors.hpp"

namespace cfm {

QuadratureRule gauss_rule() {
    static const double gx[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                 0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
    static const double gw[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                 0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    QuadratureRule r;
    for (int i = 0; i < 6; ++i) {
        r.x[i] = 0.5 * (gx[i] + 1.0);
        r.w[i] = 0.5 * gw[i];
    }
    return r;
}

namespace {

// Accumulate the upper triangle of M += w * r r^T and b += wg * r.
inline void rank1_upper(double* M, double* b, int n, const double* r, double w, double wg) {
    for (int i = 0; i < n; ++i) {
        const double wi = w * r[i];
        double* row = M + i * n;
        for (int j = i; j < n; ++j) row[j] += wi * r[j];
        b[i] += wg * r[i];
    }
}

inline void mirror_lower(double* M, int n) {
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) M[i * n + j] = M[j * n + i];
}

}  // namespace

Assembler::Assembler(int sdim, double side, double dt, double c, CFOptions opts)
    : sdim_(sdim), nd_(dof_count(sdim)), side_(side), dt_(dt), c_(c), lc_(side), opts_(opts),
      rule_(gauss_rule()) {
    if (sdim != 1 && sdim != 2) throw ConfigError("assembler dimension must be 1 or 2");
    if (opts_.c1 <= 0.0 || opts_.c2 <= 0.0) throw ConfigError("penalty coefficients must be > 0");

    // Tensor volume quadrature over the local unit cube.
    const int ny = sdim == 2 ? 6 : 1;
    for (int it = 0; it < 6; ++it)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < 6; ++ix) {
                VolPt p;
                p.xi = rule_.x[ix];
                p.eta = sdim == 2 ? rule_.x[iy] : 0.0;
                p.tau = rule_.x[it];
                p.w = rule_.w[ix] * (sdim == 2 ? rule_.w[iy] : 1.0) * rule_.w[it];
                vol_.push_back(p);
            }

    // Wave-operator rows: the Laplacian is rotation invariant, so in local
    // coordinates the rows depend only on (side, dt, c) and are shared by all
    // regions of the tiling.
    const double inv_l2 = 1.0 / (side_ * side_);
    const double inv_t2 = 1.0 / (c_ * c_ * dt_ * dt_);
    std::vector<double> rxx(nd_), ryy(nd_), rtt(nd_);
    vol_rows_.assign(vol_.size() * nd_, 0.0);
    for (std::size_t q = 0; q < vol_.size(); ++q) {
        const VolPt& p = vol_[q];
        basis_row(sdim_, 2, 0, 0, p.xi, p.eta, p.tau, rxx.data());
        if (sdim_ == 2) basis_row(sdim_, 0, 2, 0, p.xi, p.eta, p.tau, ryy.data());
        basis_row(sdim_, 0, 0, 2, p.xi, p.eta, p.tau, rtt.data());
        double* row = vol_rows_.data() + q * nd_;
        for (int k = 0; k < nd_; ++k) {
            double lap = inv_l2 * (rxx[k] + (sdim_ == 2 ? ryy[k] : 0.0));
            row[k] = lap - inv_t2 * rtt[k];
        }
    }

    const double jac = std::pow(side_, sdim_) * dt_;
    const double lc3 = lc_ * lc_ * lc_;
    m_vol_.assign(nd_ * nd_, 0.0);
    std::vector<double> dummy_b(nd_, 0.0);
    for (std::size_t q = 0; q < vol_.size(); ++q)
        rank1_upper(m_vol_.data(), dummy_b.data(), nd_, vol_rows_.data() + q * nd_,
                    lc3 * jac * vol_[q].w, 0.0);
    mirror_lower(m_vol_.data(), nd_);
}

CFSystem Assembler::assemble(const Region& region, const ProblemSpec& problem, double t0) const {
    if (region.gamma.empty())
        throw EmptyInterface("region of node " + std::to_string(region.owner) +
                             " has no interface quadrature");

    CFSystem sys;
    sys.n = nd_;
    sys.M = m_vol_;
    sys.b.assign(nd_, 0.0);
    sys.constant = 0.0;
    sys.c1 = opts_.c1;
    sys.c2 = opts_.c2;
    sys.lc = lc_;
    sys.owner = region.owner;

    const BoxMap map = region.map(t0, dt_);
    const double jac = std::pow(side_, sdim_) * dt_;
    const double lc3 = lc_ * lc_ * lc_;

    if (!problem.f_d_empty()) {
        for (std::size_t q = 0; q < vol_.size(); ++q) {
            const VolPt& p = vol_[q];
            const Vec2 x = map.map_space(p.xi, p.eta);
            const double t = map.map_time(p.tau);
            const double fd = problem.f_d(x, t);
            const double w = lc3 * jac * p.w;
            const double* row = vol_rows_.data() + q * nd_;
            for (int k = 0; k < nd_; ++k) sys.b[k] += w * fd * row[k];
            sys.constant += w * fd * fd;
        }
    }

    std::vector<double> rv(nd_), rdx(nd_), rdy(nd_), rn(nd_);
    const double lc2 = lc_ * lc_;
    for (const GammaPoint& gp : region.gamma) {
        double xi, eta, tau_unused;
        map.to_local(gp.pos, t0, xi, eta, tau_unused);
        // Projection of the interface normal onto the local axes for d/dn.
        const double n1 = (sdim_ == 1 ? gp.normal.x : gp.normal.dot(map.e1)) / side_;
        const double n2 = sdim_ == 2 ? gp.normal.dot(map.e2) / side_ : 0.0;
        for (int it = 0; it < 6; ++it) {
            const double tau = rule_.x[it];
            const double t = map.map_time(tau);
            basis_row(sdim_, 0, 0, 0, xi, eta, tau, rv.data());
            basis_row(sdim_, 1, 0, 0, xi, eta, tau, rdx.data());
            if (sdim_ == 2) basis_row(sdim_, 0, 1, 0, xi, eta, tau, rdy.data());
            for (int k = 0; k < nd_; ++k) rn[k] = n1 * rdx[k] + (sdim_ == 2 ? n2 * rdy[k] : 0.0);

            const double wt = gp.weight * dt_ * rule_.w[it];
            const double a = problem.alpha(gp.pos, t);
            const double bta = problem.beta(gp.pos, t, gp.normal);
            rank1_upper(sys.M.data(), sys.b.data(), nd_, rv.data(), opts_.c1 * wt,
                        opts_.c1 * wt * a);
            rank1_upper(sys.M.data(), sys.b.data(), nd_, rn.data(), opts_.c2 * lc2 * wt,
                        opts_.c2 * lc2 * wt * bta);
            sys.constant += opts_.c1 * wt * a * a + opts_.c2 * lc2 * wt * bta * bta;
        }
    }
    mirror_lower(sys.M.data(), nd_);
    return sys;
}

std::array<double, 3> Assembler::functional_terms(const Region& region, const ProblemSpec& problem,
                                                  double t0, std::span<const double> w) const {
    const BoxMap map = region.map(t0, dt_);
    SpaceTimeInterpolant D(map, std::vector<double>(w.begin(), w.end()));
    const double jac = std::pow(side_, sdim_) * dt_;
    const double lc3 = lc_ * lc_ * lc_;
    const double inv_c2 = 1.0 / (c_ * c_);

    double volume = 0.0;
    for (const VolPt& p : vol_) {
        const Vec2 x = map.map_space(p.xi, p.eta);
        const double t = map.map_time(p.tau);
        double lap = D.partial(2, 0, 0, x, t) + (sdim_ == 2 ? D.partial(0, 2, 0, x, t) : 0.0);
        double res = lap - inv_c2 * D.partial(0, 0, 2, x, t) - problem.f_d(x, t);
        volume += lc3 * jac * p.w * res * res;
    }

    double dirichlet = 0.0, neumann = 0.0;
    const double lc2 = lc_ * lc_;
    for (const GammaPoint& gp : region.gamma) {
        for (int it = 0; it < 6; ++it) {
            const double t = map.map_time(rule_.x[it]);
            const double wt = gp.weight * dt_ * rule_.w[it];
            double rd = D.eval(gp.pos, t) - problem.alpha(gp.pos, t);
            double dn = gp.normal.x * D.partial(1, 0, 0, gp.pos, t) +
                        (sdim_ == 2 ? gp.normal.y * D.partial(0, 1, 0, gp.pos, t) : 0.0);
            double rb = dn - problem.beta(gp.pos, t, gp.normal);
            dirichlet += opts_.c1 * wt * rd * rd;
            neumann += opts_.c2 * lc2 * wt * rb * rb;
        }
    }
    return {volume, dirichlet, neumann};
}

std::vector<double> solve(const CFSystem& system, const CFOptions& opts, SolveInfo* info) {
    const int n = system.n;
    Eigen::Map<const Eigen::MatrixXd> M(system.M.data(), n, n);
    Eigen::Map<const Eigen::VectorXd> b(system.b.data(), n);

    auto fail = [&](double cond) -> IllConditioned {
        return IllConditioned(cond, system.owner,
                              "region system at node " + std::to_string(system.owner) +
                                  " is ill-conditioned (cond ~ " + std::to_string(cond) + ")");
    };

    // Symmetric Jacobi equilibration: slope-DOF basis functions are an order of
    // magnitude smaller than value ones, which skews the raw Gram diagonal by
    // ~1e5 without changing the minimizer.
    Eigen::VectorXd s(n);
    const double dmax_diag = M.diagonal().maxCoeff();
    for (int i = 0; i < n; ++i) {
        const double d = M(i, i);
        if (!(d > 0.0) || d < 1e-300 * dmax_diag)
            throw fail(std::numeric_limits<double>::infinity());
        s(i) = 1.0 / std::sqrt(d);
    }
    const Eigen::MatrixXd Ms = s.asDiagonal() * M * s.asDiagonal();
    const Eigen::VectorXd bs = s.asDiagonal() * b;

    Eigen::VectorXd y;
    double cond;
    if (opts.use_qr) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ms);
        const auto& R = qr.matrixR();
        double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double d = std::abs(R(i, i));
            rmax = std::max(rmax, d);
            rmin = std::min(rmin, d);
        }
        cond = rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
        if (!std::isfinite(cond) || cond > opts.cond_limit) throw fail(cond);
        y = qr.solve(bs);
        y += qr.solve(bs - Ms * y);
    } else {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(Ms);
        const auto& d = ldlt.vectorD();
        const double dmin = d.minCoeff(), dmaxv = d.maxCoeff();
        // Pivot-ratio estimate of the spectral condition number; the 1-norm
        // estimator overshoots these Gram matrices by orders of magnitude.
        cond = dmin > 0.0 ? dmaxv / dmin : std::numeric_limits<double>::infinity();
        if (ldlt.info() != Eigen::Success || dmin <= 0.0 || !std::isfinite(cond) ||
            cond > opts.cond_limit)
            throw fail(cond);
        y = ldlt.solve(bs);
        // One step of iterative refinement recovers the digits the
        // equilibrated factorization still leaves on the table.
        y += ldlt.solve(bs - Ms * y);
    }
    if (info) info->cond = cond;
    Eigen::VectorXd w = s.asDiagonal() * y;
    return std::vector<double>(w.data(), w.data() + n);
}

double residual(const CFSystem& system, std::span<const double> w) {
    const int n = system.n;
    double quad = 0.0, lin = 0.0;
    for (int i = 0; i < n; ++i) {
        double mi = 0.0;
        const double* row = system.M.data() + i * n;
        for (int j = 0; j < n; ++j) mi += row[j] * w[j];
        quad += w[i] * mi;
        lin += system.b[i] * w[i];
    }
    return quad - 2.0 * lin + system.constant;
}

std::vector<SpaceTimeInterpolant> solve_regions_serial(const Tiling& tiling,
                                                       const ProblemSpec& problem,
                                                       const Assembler& assembler, double t0,
                                                       std::vector<SolveInfo>* info) {
    const std::size_t count = tiling.regions.size();
    std::vector<SpaceTimeInterpolant> out(count);
    if (info) info->resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const Region& region = tiling.regions[k];
        CFSystem sys = assembler.assemble(region, problem, t0);
        SolveInfo si;
        std::vector<double> w = solve(sys, assembler.options(), &si);
        if (info) (*info)[k] = si;
        out[k] = SpaceTimeInterpolant(region.map(t0, assembler.dt()), std::move(w));
    }
    return out;
}

std::vector<SpaceTimeInterpolant> solve_regions(const Tiling& tiling, const ProblemSpec& problem,
                                                const Assembler& assembler, double t0, int threads,
                                                std::vector<SolveInfo>* info) {
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#else
    threads = 1;
#endif
    if (threads == 1) return solve_regions_serial(tiling, problem, assembler, t0, info);

    const int count = static_cast<int>(tiling.regions.size());
    std::vector<SpaceTimeInterpolant> out(count);
    if (info) info->resize(count);
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (int k = 0; k < count; ++k) {
        try {
            const Region& region = tiling.regions[k];
            CFSystem sys = assembler.assemble(region, problem, t0);
            SolveInfo si;
            std::vector<double> w = solve(sys, assembler.options(), &si);
            if (info) (*info)[k] = si;
            out[k] = SpaceTimeInterpolant(region.map(t0, assembler.dt()), std::move(w));
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (int k = 0; k < count; ++k)
        if (errors[k]) std::rethrow_exception(errors[k]);
    return out;
}

}  // namespace cfm
