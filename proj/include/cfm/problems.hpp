#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cfm/geometry.hpp"

namespace cfm {

/// One separable factor a*sin(k*s + phase), a*exp(k*s), or a cubic polynomial;
/// closed under differentiation, so all mixed partials of a product are exact.
struct Factor {
    enum class Kind { Sin, Exp, Poly };
    Kind kind = Kind::Exp;
    double amp = 1.0;
    double k = 0.0;
    double phase = 0.0;
    std::array<double, 4> poly{};  // Kind::Poly: amp * sum poly[i] * s^i

    static Factor one() { return {Kind::Exp, 1.0, 0.0, 0.0, {}}; }
    static Factor sine(double amp, double k, double phase = 0.0) {
        return {Kind::Sin, amp, k, phase, {}};
    }
    static Factor cosine(double amp, double k) { return {Kind::Sin, amp, k, M_PI / 2.0, {}}; }
    static Factor expo(double amp, double k) { return {Kind::Exp, amp, k, 0.0, {}}; }
    static Factor cubic(std::array<double, 4> coeffs, double amp = 1.0) {
        return {Kind::Poly, amp, 0.0, 0.0, coeffs};
    }

    double value(double s) const {
        switch (kind) {
            case Kind::Sin: return amp * std::sin(k * s + phase);
            case Kind::Exp: return amp * std::exp(k * s);
            default: return amp * (poly[0] + s * (poly[1] + s * (poly[2] + s * poly[3])));
        }
    }
    /// m-th derivative value; sin picks up a phase of m*pi/2, exp a power of k.
    double dvalue(int m, double s) const {
        if (kind == Kind::Poly) {
            std::array<double, 4> c = poly;
            for (int d = 0; d < m; ++d) {
                for (int i = 0; i + 1 < 4; ++i) c[i] = (i + 1) * c[i + 1];
                c[3] = 0.0;
            }
            return amp * (c[0] + s * (c[1] + s * (c[2] + s * c[3])));
        }
        double scale = 1.0;
        for (int i = 0; i < m; ++i) scale *= k;
        return kind == Kind::Sin ? amp * scale * std::sin(k * s + phase + m * M_PI_2)
                                 : amp * scale * std::exp(k * s);
    }
    /// Eigenvalue of the second derivative: f'' = lambda2 * f. Polynomials are
    /// not eigenfunctions; wave_forcing is unavailable for them.
    double lambda2() const {
        if (kind == Kind::Poly) throw CfmError("polynomial factor has no wave-operator eigenvalue");
        return kind == Kind::Sin ? -k * k : k * k;
    }
};

struct Term {
    Factor fx = Factor::one();
    Factor fy = Factor::one();
    Factor ft = Factor::one();
};

/// Sum of separable terms; all partial derivatives are closed-form.
class FieldExpr {
  public:
    FieldExpr() = default;
    explicit FieldExpr(std::vector<Term> terms) : terms_(std::move(terms)) {}

    bool empty() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

    double value(const Vec2& p, double t) const {
        double acc = 0.0;
        for (const Term& tm : terms_) acc += tm.fx.value(p.x) * tm.fy.value(p.y) * tm.ft.value(t);
        return acc;
    }
    double partial(int mx, int my, int mt, const Vec2& p, double t) const {
        double acc = 0.0;
        for (const Term& tm : terms_)
            acc += tm.fx.dvalue(mx, p.x) * tm.fy.dvalue(my, p.y) * tm.ft.dvalue(mt, t);
        return acc;
    }

    /// Forcing of the wave operator: lap(u) - u_tt / c^2, evaluated term-wise
    /// through the second-derivative eigenvalues. Terms that satisfy the
    /// dispersion relation drop out exactly.
    FieldExpr wave_forcing(double c) const;

    friend FieldExpr operator-(const FieldExpr& a, const FieldExpr& b);

  private:
    std::vector<Term> terms_;
};

/// Manufactured interface problem: branch solutions smooth across the curve,
/// with forcing and jump data derived from them.
struct ProblemSpec {
    std::string id;
    int dim = 1;
    double c = 1.0;
    std::shared_ptr<const Interface> curve;  // null for continuous (no-interface) problems
    FieldExpr u_plus, u_minus;
    FieldExpr f_plus, f_minus;  // wave_forcing of the branches
    double lower = 0.0, upper = 1.0;
    double t_end_default = 1.0;
    double default_gamma = 1.0;  // dt/dx ratio

    const FieldExpr& branch(int side) const { return side > 0 ? u_plus : u_minus; }

    double u(const Vec2& p, double t, int side) const { return branch(side).value(p, t); }
    double dudt(const Vec2& p, double t, int side) const {
        return branch(side).partial(0, 0, 1, p, t);
    }
    double f(const Vec2& p, double t, int side) const {
        return (side > 0 ? f_plus : f_minus).value(p, t);
    }

    /// Jump data on the curve: alpha = [u], beta = [du/dn], and the forcing
    /// jump driving the correction-function PDE.
    double alpha(const Vec2& p, double t) const { return u_plus.value(p, t) - u_minus.value(p, t); }
    double beta(const Vec2& p, double t, const Vec2& normal) const {
        double gx = u_plus.partial(1, 0, 0, p, t) - u_minus.partial(1, 0, 0, p, t);
        double gy = dim == 2 ? u_plus.partial(0, 1, 0, p, t) - u_minus.partial(0, 1, 0, p, t) : 0.0;
        return normal.x * gx + normal.y * gy;
    }
    double f_d(const Vec2& p, double t) const { return f_plus.value(p, t) - f_minus.value(p, t); }
    bool f_d_empty() const { return f_plus.empty() && f_minus.empty(); }

    /// The correction function's exact extension u+ - u-.
    FieldExpr jump_field() const { return u_plus - u_minus; }

    /// Same problem with the minus branch everywhere and no interface.
    ProblemSpec continuous_variant() const;
};

ProblemSpec problem_1d_two_interfaces();
ProblemSpec problem_circle();
ProblemSpec problem_star();
ProblemSpec problem_osculating();
ProblemSpec problem_em_shielding(double c = 1.0);

/// Lookup by id: line1d, circle, star, osculating, em-shield.
ProblemSpec make_problem(const std::string& id, double c_em = 1.0);

}  // namespace cfm
