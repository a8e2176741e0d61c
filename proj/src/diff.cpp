#include "gaugeforge/diff.hpp"

#include "gaugeforge/simplify.hpp"

namespace gaugeforge {

namespace {

Expr d(const Expr& e, std::string_view var) {
    switch (e.kind()) {
        case NodeKind::Constant:
        case NodeKind::Parameter:
            return Expr::integer(0);
        case NodeKind::Symbol:
            return Expr::integer(e.name() == var ? 1 : 0);
        case NodeKind::Sum: {
            ExprList terms;
            terms.reserve(e.arity());
            for (const Expr& c : e.children()) terms.push_back(d(c, var));
            return Expr::sum(std::move(terms));
        }
        case NodeKind::Product: {
            // n-ary product rule
            ExprList terms;
            auto kids = e.children();
            for (std::size_t i = 0; i < kids.size(); ++i) {
                ExprList fs(kids.begin(), kids.end());
                fs[i] = d(kids[i], var);
                terms.push_back(Expr::product(std::move(fs)));
            }
            return Expr::sum(std::move(terms));
        }
        case NodeKind::Power: {
            const Expr& u = e.child(0);
            const Expr& w = e.child(1);
            Expr dw = simplify(d(w, var));
            if (dw.is_zero()) {
                // d(u^w) = w * u^(w-1) * u'
                return Expr::product(
                    {w, Expr::power(u, Expr::sum({w, Expr::integer(-1)})), d(u, var)});
            }
            // general case: u^w * (w' ln u + w u'/u)
            Expr inner = Expr::sum({Expr::product({dw, Expr::call(UnaryFn::Ln, u)}),
                                    Expr::product({w, Expr::quotient(d(u, var), u)})});
            return Expr::product({e, std::move(inner)});
        }
        case NodeKind::Negation:
            return Expr::negation(d(e.child(0), var));
        case NodeKind::Quotient: {
            const Expr& u = e.child(0);
            const Expr& v = e.child(1);
            Expr numer = Expr::sum({Expr::product({d(u, var), v}),
                                    Expr::negation(Expr::product({u, d(v, var)}))});
            return Expr::quotient(std::move(numer), Expr::power(v, Expr::integer(2)));
        }
        case NodeKind::FunctionCall: {
            const Expr& u = e.child(0);
            Expr outer;
            switch (e.function()) {
                case UnaryFn::Sin: outer = Expr::call(UnaryFn::Cos, u); break;
                case UnaryFn::Cos: outer = Expr::negation(Expr::call(UnaryFn::Sin, u)); break;
                case UnaryFn::Tan:
                    outer = Expr::quotient(Expr::integer(1),
                                           Expr::power(Expr::call(UnaryFn::Cos, u), Expr::integer(2)));
                    break;
                case UnaryFn::Exp: outer = e; break;
                case UnaryFn::Ln: outer = Expr::quotient(Expr::integer(1), u); break;
                case UnaryFn::Sinh: outer = Expr::call(UnaryFn::Cosh, u); break;
                case UnaryFn::Cosh: outer = Expr::call(UnaryFn::Sinh, u); break;
                case UnaryFn::Tanh:
                    outer = Expr::quotient(Expr::integer(1),
                                           Expr::power(Expr::call(UnaryFn::Cosh, u), Expr::integer(2)));
                    break;
                case UnaryFn::Sqrt:
                    outer = Expr::quotient(Expr::integer(1), Expr::product({Expr::integer(2), e}));
                    break;
            }
            return Expr::product({std::move(outer), d(u, var)});
        }
    }
    throw std::logic_error("unreachable node kind");
}

}  // namespace

Expr diff(const Expr& e, std::string_view var) { return simplify(d(e, var)); }

Expr total_time_derivative(const Expr& e) {
    if (e.contains(reserved::xddot))
        throw std::invalid_argument("total time derivative requires an expression over {x, t, xdot}");
    Expr dt = d(e, reserved::t);
    Expr dx = Expr::product({sym_xdot(), d(e, reserved::x)});
    Expr dv = Expr::product({sym_xddot(), d(e, reserved::xdot)});
    return simplify(Expr::sum({std::move(dt), std::move(dx), std::move(dv)}));
}

}  // namespace gaugeforge
