#include "gaugeforge/mechanics.hpp"

#include "gaugeforge/diff.hpp"
#include "gaugeforge/eval.hpp"
#include "gaugeforge/simplify.hpp"

namespace gaugeforge {
namespace {

void require_free_of(const Expr& e, std::string_view name, const char* what) {
    if (e.contains(name))
        throw std::invalid_argument(std::string(what) + " must not contain '" + std::string(name) +
                                    "' (got '" + e.str() + "')");
}

// Family coefficients are real constants: parameters allowed, dynamical
// variables not.
void require_coefficient(const Expr& c, const char* what) {
    for (std::string_view n : {reserved::x, reserved::t, reserved::xdot, reserved::xddot})
        require_free_of(c, n, what);
}

bool is_zero_numeric(const Expr& e) {
    if (e.is_zero()) return true;
    return equal_numeric(e, Expr::integer(0), default_domains({e}));
}

}  // namespace

GaugeFunction::GaugeFunction(Expr body) : body_(simplify(body)) {
    require_free_of(body_, reserved::xdot, "a gauge function");
    require_free_of(body_, reserved::xddot, "a gauge function");
}

std::string_view role_name(Role r) {
    switch (r) {
        case Role::Standard: return "standard";
        case Role::Null: return "null";
        case Role::Total: return "total";
    }
    return "?";
}

std::string_view family_name(Family f) {
    switch (f) {
        case Family::G1: return "g1";
        case Family::G2: return "g2";
        case Family::G3: return "g3";
    }
    return "?";
}

Lagrangian::Lagrangian(Expr body, Role role) : body_(simplify(body)), role_(role) {
    require_free_of(body_, reserved::xddot, "a Lagrangian");
    if (role_ == Role::Null && !is_null(*this))
        throw std::invalid_argument("Lagrangian tagged null fails the null check: '" +
                                    body_.str() + "'");
}

Lagrangian null_from_gauge(const GaugeFunction& phi) {
    return Lagrangian(total_time_derivative(phi.body()), Role::Null);
}

Expr euler_lagrange(const Lagrangian& L) {
    Expr momentum = diff(L.body(), reserved::xdot);
    return simplify(total_time_derivative(momentum) - diff(L.body(), reserved::x));
}

bool is_null(const Lagrangian& L) {
    return is_zero_numeric(euler_lagrange(L));
}

Expr energy_function(const Lagrangian& L) {
    return simplify(sym_xdot() * diff(L.body(), reserved::xdot) - L.body());
}

Expr energy_from_gauge(const GaugeFunction& phi) {
    return simplify(-diff(phi.body(), reserved::t));
}

Expr force_from_gauge(const GaugeFunction& phi, Sign sigma) {
    Expr mixed = diff(diff(phi.body(), reserved::t), reserved::x);
    return simplify(Expr::integer(sign_value(sigma)) * mixed);
}

Lagrangian total_with_null(const Lagrangian& standard, const GaugeFunction& phi) {
    if (standard.role() != Role::Standard)
        throw std::invalid_argument("total_with_null needs a standard-role Lagrangian");
    return Lagrangian(standard.body() + null_from_gauge(phi).body(), Role::Total);
}

Lagrangian drive_with_gauge(const Lagrangian& standard, const GaugeFunction& phi, Sign sigma) {
    if (standard.role() != Role::Standard)
        throw std::invalid_argument("drive_with_gauge needs a standard-role Lagrangian");
    Expr driven = standard.body() +
                  Expr::integer(sign_value(sigma)) * diff(phi.body(), reserved::t);
    return Lagrangian(std::move(driven), Role::Total);
}

Lagrangian default_standard_lagrangian() {
    Expr half = num(1, 2);
    Expr body = half * pow(sym_xdot(), Expr::integer(2)) - half * pow(sym_x(), Expr::integer(2));
    return Lagrangian(std::move(body), Role::Standard);
}

GaugeFamilySpec GaugeFamilySpec::make_g1(std::map<std::pair<int, int>, Expr> coeffs) {
    GaugeFamilySpec s;
    s.family = Family::G1;
    s.g1 = std::move(coeffs);
    return s;
}

GaugeFamilySpec GaugeFamilySpec::make_g2(std::vector<G2Term> terms) {
    GaugeFamilySpec s;
    s.family = Family::G2;
    s.g2 = std::move(terms);
    return s;
}

GaugeFamilySpec GaugeFamilySpec::make_g3(std::vector<G3Term> terms) {
    GaugeFamilySpec s;
    s.family = Family::G3;
    s.g3 = std::move(terms);
    return s;
}

GaugeFamilyResult family_g1(const std::map<std::pair<int, int>, Expr>& coeffs) {
    ExprList phi_terms, null_terms, force_terms;
    for (const auto& [mn, c] : coeffs) {
        auto [m, n] = mn;
        if (m < 1 || n < 1)
            throw std::invalid_argument("family g1 exponents must be positive (got m=" +
                                        std::to_string(m) + ", n=" + std::to_string(n) + ")");
        require_coefficient(c, "a family g1 coefficient");
        Expr xm1 = pow(sym_x(), Expr::integer(m - 1));
        Expr tn1 = pow(sym_t(), Expr::integer(n - 1));
        phi_terms.push_back(c * pow(sym_x(), Expr::integer(m)) * pow(sym_t(), Expr::integer(n)));
        null_terms.push_back(
            c * (Expr::integer(m) * sym_xdot() * sym_t() + Expr::integer(n) * sym_x()) * xm1 * tn1);
        force_terms.push_back(Expr::integer(m) * Expr::integer(n) * c * xm1 * tn1);
    }
    return GaugeFamilyResult{GaugeFunction(Expr::sum(std::move(phi_terms))),
                             Lagrangian(Expr::sum(std::move(null_terms)), Role::Null),
                             simplify(Expr::sum(std::move(force_terms)))};
}

GaugeFamilyResult family_g2(const std::vector<G2Term>& terms) {
    ExprList phi_terms, null_terms, force_terms;
    for (const G2Term& term : terms) {
        if (term.m < 1)
            throw std::invalid_argument("family g2 exponents must be positive (got m=" +
                                        std::to_string(term.m) + ")");
        require_coefficient(term.c, "a family g2 coefficient");
        require_free_of(term.f, reserved::x, "a family g2 time profile");
        require_free_of(term.f, reserved::xdot, "a family g2 time profile");
        require_free_of(term.f, reserved::xddot, "a family g2 time profile");
        Expr fprime = diff(term.f, reserved::t);
        Expr xm1 = pow(sym_x(), Expr::integer(term.m - 1));
        phi_terms.push_back(term.c * pow(sym_x(), Expr::integer(term.m)) * term.f);
        null_terms.push_back(
            (Expr::integer(term.m) * term.f * sym_xdot() + fprime * sym_x()) * term.c * xm1);
        force_terms.push_back(Expr::integer(term.m) * fprime * term.c * xm1);
    }
    return GaugeFamilyResult{GaugeFunction(Expr::sum(std::move(phi_terms))),
                             Lagrangian(Expr::sum(std::move(null_terms)), Role::Null),
                             simplify(Expr::sum(std::move(force_terms)))};
}

GaugeFamilyResult family_g3(const std::vector<G3Term>& terms) {
    ExprList phi_terms, null_terms, force_terms;
    for (const G3Term& term : terms) {
        require_coefficient(term.c, "a family g3 coefficient");
        require_free_of(term.f, reserved::x, "a family g3 time profile");
        require_free_of(term.f, reserved::xdot, "a family g3 time profile");
        require_free_of(term.f, reserved::xddot, "a family g3 time profile");
        require_free_of(term.g, reserved::t, "a family g3 space profile");
        require_free_of(term.g, reserved::xdot, "a family g3 space profile");
        require_free_of(term.g, reserved::xddot, "a family g3 space profile");
        Expr fprime = diff(term.f, reserved::t);
        Expr gprime = diff(term.g, reserved::x);
        phi_terms.push_back(term.c * term.f * term.g);
        null_terms.push_back(term.c * (fprime * term.g + sym_xdot() * term.f * gprime));
        force_terms.push_back(term.c * fprime * gprime);
    }
    return GaugeFamilyResult{GaugeFunction(Expr::sum(std::move(phi_terms))),
                             Lagrangian(Expr::sum(std::move(null_terms)), Role::Null),
                             simplify(Expr::sum(std::move(force_terms)))};
}

GaugeFamilyResult build_family(const GaugeFamilySpec& spec) {
    switch (spec.family) {
        case Family::G1: return family_g1(spec.g1);
        case Family::G2: return family_g2(spec.g2);
        case Family::G3: return family_g3(spec.g3);
    }
    throw std::invalid_argument("unknown gauge family");
}

}  // namespace gaugeforge
