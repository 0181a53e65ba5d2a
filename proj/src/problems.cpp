#include "cfm/problems.hpp"

#include <cmath>

#include "cfm/errors.hpp"

namespace cfm {

FieldExpr FieldExpr::wave_forcing(double c) const {
    std::vector<Term> out;
    const double inv_c2 = 1.0 / (c * c);
    for (const Term& tm : terms_) {
        double lam = tm.fx.lambda2() + tm.fy.lambda2() - inv_c2 * tm.ft.lambda2();
        double ref = std::abs(tm.fx.lambda2()) + std::abs(tm.fy.lambda2()) +
                     inv_c2 * std::abs(tm.ft.lambda2());
        if (std::abs(lam) <= 1e-11 * ref) continue;  // dispersion-satisfying term
        Term scaled = tm;
        scaled.fx.amp *= lam;
        out.push_back(scaled);
    }
    return FieldExpr(std::move(out));
}

FieldExpr operator-(const FieldExpr& a, const FieldExpr& b) {
    std::vector<Term> out = a.terms_;
    for (Term tm : b.terms_) {
        tm.fx.amp = -tm.fx.amp;
        out.push_back(tm);
    }
    return FieldExpr(std::move(out));
}

ProblemSpec ProblemSpec::continuous_variant() const {
    ProblemSpec p = *this;
    p.id += "-continuous";
    p.curve.reset();
    p.u_plus = p.u_minus;
    p.f_plus = p.f_minus;
    return p;
}

ProblemSpec problem_1d_two_interfaces() {
    const double k = 2.0 * M_PI;
    ProblemSpec p;
    p.id = "line1d";
    p.dim = 1;
    p.c = 1.0;
    p.curve = std::make_shared<PointSet1D>(std::vector<double>{0.3, 0.7});
    p.u_minus = FieldExpr({{Factor::sine(1.0, k), Factor::one(), Factor::cosine(1.0, k)}});
    p.u_plus = FieldExpr({{Factor::sine(2.0, k), Factor::one(), Factor::cosine(1.0, k)}});
    p.f_plus = p.u_plus.wave_forcing(p.c);
    p.f_minus = p.u_minus.wave_forcing(p.c);
    p.lower = 0.0;
    p.upper = 1.0;
    p.t_end_default = 1.0;
    p.default_gamma = 1.0;
    return p;
}

ProblemSpec problem_circle() {
    const double k = 2.0 * M_PI;
    ProblemSpec p;
    p.id = "circle";
    p.dim = 2;
    // The branch solutions solve the homogeneous wave equation at this speed,
    // which is also what makes dt = dx sit inside the stability region.
    p.c = 1.0 / std::sqrt(2.0);
    p.curve = std::make_shared<Circle>(Vec2{0.5, 0.5}, 0.25);
    p.u_plus = FieldExpr({{Factor::sine(-2.0, k), Factor::sine(1.0, k), Factor::cosine(1.0, k)}});
    p.u_minus = FieldExpr({{Factor::sine(1.0, k), Factor::sine(1.0, k), Factor::cosine(1.0, k)}});
    p.f_plus = p.u_plus.wave_forcing(p.c);
    p.f_minus = p.u_minus.wave_forcing(p.c);
    p.lower = 0.0;
    p.upper = 1.0;
    p.t_end_default = 1.0;
    p.default_gamma = 1.0;
    return p;
}

ProblemSpec problem_star() {
    ProblemSpec p;
    p.id = "star";
    p.dim = 2;
    p.c = 1.0 / std::sqrt(2.0);
    p.curve = std::make_shared<ParametricStar>(Vec2{0.5, 0.5}, 0.25, 0.05, 5);
    p.u_plus = FieldExpr();  // zero outside
    p.u_minus =
        FieldExpr({{Factor::expo(1.0, M_PI), Factor::sine(1.0, 3.0 * M_PI), Factor::cosine(1.0, 2.0 * M_PI)}});
    p.f_plus = p.u_plus.wave_forcing(p.c);
    p.f_minus = p.u_minus.wave_forcing(p.c);
    p.lower = 0.0;
    p.upper = 1.0;
    p.t_end_default = 1.0;
    p.default_gamma = 1.0;
    return p;
}

ProblemSpec problem_osculating() {
    const double k = 2.0 * M_PI;
    const double r = std::sqrt(3.0) / 2.0;
    ProblemSpec p;
    p.id = "osculating";
    p.dim = 2;
    p.c = 1.0 / std::sqrt(2.0);
    // Centers ordered bottom, right, left so the boundary arcs chain CCW.
    p.curve = std::make_shared<OsculatingCircles>(
        std::array<Vec2, 3>{Vec2{0.5, -0.6}, Vec2{0.5 + r, 0.9}, Vec2{0.5 - r, 0.9}}, r);
    p.u_plus = FieldExpr({{Factor::sine(0.5, k), Factor::sine(1.0, k), Factor::cosine(1.0, k)}});
    p.u_minus = FieldExpr({{Factor::expo(1.0, 1.0), Factor::expo(1.0, 1.0), Factor::cosine(1.0, k)}});
    p.f_plus = p.u_plus.wave_forcing(p.c);
    p.f_minus = p.u_minus.wave_forcing(p.c);
    p.lower = 0.0;
    p.upper = 1.0;
    p.t_end_default = 1.0;
    p.default_gamma = 1.0;
    return p;
}

ProblemSpec problem_em_shielding(double c) {
    if (c <= 0.0) throw ConfigError("wave speed must be positive");
    const double k = 2.0 * M_PI;
    const double omega = 2.0 * std::sqrt(2.0) * M_PI * c;
    ProblemSpec p;
    p.id = "em-shield";
    p.dim = 2;
    p.c = c;
    p.curve = std::make_shared<ParametricStar>(Vec2{0.0, 0.0}, 0.25, 0.05, 5);
    // Plane wave sin(2pi(x+y) - omega t) expanded into separable terms.
    p.u_plus = FieldExpr({
        {Factor::sine(1.0, k), Factor::cosine(1.0, k), Factor::cosine(1.0, omega)},
        {Factor::cosine(1.0, k), Factor::sine(1.0, k), Factor::cosine(1.0, omega)},
        {Factor::cosine(-1.0, k), Factor::cosine(1.0, k), Factor::sine(1.0, omega)},
        {Factor::sine(1.0, k), Factor::sine(1.0, k), Factor::sine(1.0, omega)},
    });
    p.u_minus = FieldExpr();  // shielded interior
    p.f_plus = p.u_plus.wave_forcing(p.c);
    p.f_minus = p.u_minus.wave_forcing(p.c);
    p.lower = -0.5;
    p.upper = 0.5;
    p.t_end_default = 2.0 * M_PI / omega;  // one temporal period
    p.default_gamma = 0.75 / c;            // dt = (3/4) dx / c
    return p;
}

ProblemSpec make_problem(const std::string& id, double c_em) {
    if (id == "line1d") return problem_1d_two_interfaces();
    if (id == "circle") return problem_circle();
    if (id == "star") return problem_star();
    if (id == "osculating") return problem_osculating();
    if (id == "em-shield") return problem_em_shielding(c_em);
    throw ConfigError("unknown problem id: " + id);
}

}  // namespace cfm
