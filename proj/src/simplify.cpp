#include "gaugeforge/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gaugeforge {

namespace {

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return Expr::compare(a, b) < 0; }
};

Expr canon_sum(ExprList terms);
Expr canon_product(ExprList factors);

bool is_integer_constant(const Expr& e) {
    return e.kind() == NodeKind::Constant && e.number().is_integer();
}

Expr canon_pow(const Expr& base, const Expr& exponent) {
    if (exponent.is_zero()) return Expr::integer(1);  // includes 0^0 -> 1
    if (exponent.is_one()) return base;
    if (base.is_one()) return Expr::integer(1);
    if (base.is_constant() && exponent.is_constant())
        return Expr::constant(base.number().pow(exponent.number()));
    if (base.kind() == NodeKind::Power && is_integer_constant(exponent)) {
        // (u^a)^k -> u^(a*k); sound for integer k
        return canon_pow(base.child(0), canon_product({base.child(1), exponent}));
    }
    if (base.kind() == NodeKind::Product && is_integer_constant(exponent)) {
        ExprList factors;
        factors.reserve(base.arity());
        for (const Expr& f : base.children()) factors.push_back(canon_pow(f, exponent));
        return canon_product(std::move(factors));
    }
    return Expr::power(base, exponent);
}

// factor -> (base, exponent)
std::pair<Expr, Expr> split_power(const Expr& factor) {
    if (factor.kind() == NodeKind::Power) return {factor.child(0), factor.child(1)};
    return {factor, Expr::integer(1)};
}

Expr canon_product(ExprList factors) {
    ExprList flat;
    flat.reserve(factors.size());
    for (Expr& f : factors) {
        if (f.kind() == NodeKind::Product)
            for (const Expr& c : f.children()) flat.push_back(c);
        else
            flat.push_back(std::move(f));
    }

    Numeric coeff = Numeric::integer(1);
    std::map<Expr, ExprList, ExprLess> by_base;
    for (const Expr& f : flat) {
        if (f.is_constant()) {
            coeff = coeff * f.number();
            continue;
        }
        auto [base, exp] = split_power(f);
        by_base[base].push_back(exp);
    }
    if (coeff.is_zero()) return Expr::integer(0);

    ExprList out;
    for (auto& [base, exps] : by_base) {
        Expr merged = exps.size() == 1 ? exps.front() : canon_sum(std::move(exps));
        Expr f = canon_pow(base, merged);
        if (f.is_constant())
            coeff = coeff * f.number();
        else if (f.kind() == NodeKind::Product)
            // merging can cascade, e.g. (x*t)^2 distributing back into factors
            for (const Expr& c : f.children()) out.push_back(c);
        else
            out.push_back(f);
    }
    if (coeff.is_zero()) return Expr::integer(0);

    // Distribute over sum factors that involve the dynamical variables so
    // additive cancellation can see through products; powers of sums stay
    // folded, which keeps expansion linear rather than multinomial.
    // Parameter-only sums like (2 + 2*n) stay factored: they behave as
    // scalar coefficients, and keeping them intact lets ratios such as
    // (2 + 2*n)/(2 + 2*n) cancel through like-base merging.
    auto involves_dynamics = [](const Expr& e) {
        return e.contains(reserved::x) || e.contains(reserved::t) ||
               e.contains(reserved::xdot) || e.contains(reserved::xddot);
    };
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].kind() != NodeKind::Sum || !involves_dynamics(out[i])) continue;
        ExprList others;
        others.reserve(out.size());
        if (!coeff.is_one()) others.push_back(Expr::constant(coeff));
        for (std::size_t j = 0; j < out.size(); ++j)
            if (j != i) others.push_back(out[j]);
        ExprList expanded;
        expanded.reserve(out[i].arity());
        for (const Expr& term : out[i].children()) {
            ExprList fs = others;
            fs.push_back(term);
            expanded.push_back(canon_product(std::move(fs)));
        }
        return canon_sum(std::move(expanded));
    }

    std::sort(out.begin(), out.end(), ExprLess{});

    if (out.empty()) return Expr::constant(coeff);
    if (!coeff.is_one()) out.insert(out.begin(), Expr::constant(coeff));
    return Expr::product(std::move(out));
}

// term -> (numeric coefficient, non-constant core)
std::pair<Numeric, Expr> split_coefficient(const Expr& term) {
    if (term.kind() == NodeKind::Product && term.arity() >= 2 && term.child(0).is_constant()) {
        ExprList rest(term.children().begin() + 1, term.children().end());
        return {term.child(0).number(), Expr::product(std::move(rest))};
    }
    return {Numeric::integer(1), term};
}

Expr canon_sum(ExprList terms) {
    ExprList flat;
    flat.reserve(terms.size());
    for (Expr& t : terms) {
        if (t.kind() == NodeKind::Sum)
            for (const Expr& c : t.children()) flat.push_back(c);
        else
            flat.push_back(std::move(t));
    }

    Numeric constant = Numeric::integer(0);
    std::map<Expr, Numeric, ExprLess> by_core;
    for (const Expr& t : flat) {
        if (t.is_constant()) {
            constant = constant + t.number();
            continue;
        }
        auto [coeff, core] = split_coefficient(t);
        auto [it, fresh] = by_core.emplace(core, coeff);
        if (!fresh) it->second = it->second + coeff;
    }

    ExprList out;
    for (auto& [core, coeff] : by_core) {
        if (coeff.is_zero()) continue;
        if (coeff.is_one()) {
            out.push_back(core);
        } else if (core.kind() == NodeKind::Product) {
            ExprList fs;
            fs.reserve(core.arity() + 1);
            fs.push_back(Expr::constant(coeff));
            for (const Expr& c : core.children()) fs.push_back(c);
            out.push_back(Expr::product(std::move(fs)));
        } else {
            out.push_back(Expr::product({Expr::constant(coeff), core}));
        }
    }
    if (!constant.is_zero()) out.push_back(Expr::constant(constant));
    std::sort(out.begin(), out.end(), ExprLess{});

    if (out.empty()) return Expr::integer(0);
    return Expr::sum(std::move(out));
}

Expr fold_call(UnaryFn fn, const Expr& arg) {
    if (!arg.is_constant()) return Expr::call(fn, arg);
    double v = arg.number().value();
    double r = 0.0;
    switch (fn) {
        case UnaryFn::Sin: r = std::sin(v); break;
        case UnaryFn::Cos: r = std::cos(v); break;
        case UnaryFn::Tan: r = std::tan(v); break;
        case UnaryFn::Exp: r = std::exp(v); break;
        case UnaryFn::Sinh: r = std::sinh(v); break;
        case UnaryFn::Cosh: r = std::cosh(v); break;
        case UnaryFn::Tanh: r = std::tanh(v); break;
        case UnaryFn::Ln:
            if (v <= 0.0) throw ExprDomainError("ln of a non-positive constant");
            r = std::log(v);
            break;
        case UnaryFn::Sqrt:
            if (v < 0.0) throw ExprDomainError("sqrt of a negative constant");
            r = std::sqrt(v);
            break;
    }
    if (!std::isfinite(r)) throw ExprDomainError("constant fold overflowed");
    return Expr::constant(Numeric(r));
}

}  // namespace

Expr simplify(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Constant:
        case NodeKind::Symbol:
        case NodeKind::Parameter:
            return e;
        case NodeKind::Sum: {
            ExprList kids;
            kids.reserve(e.arity());
            for (const Expr& c : e.children()) kids.push_back(simplify(c));
            return canon_sum(std::move(kids));
        }
        case NodeKind::Product: {
            ExprList kids;
            kids.reserve(e.arity());
            for (const Expr& c : e.children()) kids.push_back(simplify(c));
            return canon_product(std::move(kids));
        }
        case NodeKind::Power:
            return canon_pow(simplify(e.child(0)), simplify(e.child(1)));
        case NodeKind::Negation:
            return canon_product({Expr::integer(-1), simplify(e.child(0))});
        case NodeKind::Quotient:
            return canon_product(
                {simplify(e.child(0)), canon_pow(simplify(e.child(1)), Expr::integer(-1))});
        case NodeKind::FunctionCall:
            return fold_call(e.function(), simplify(e.child(0)));
    }
    throw std::logic_error("unreachable node kind");
}

bool is_canonical_zero(const Expr& e) { return e.is_zero(); }

}  // namespace gaugeforge
