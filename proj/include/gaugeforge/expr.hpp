#pragma once

// Immutable expression trees over the reserved symbols {x, t, xdot, xddot}
// plus free real parameters. Every other component of the engine (mechanics,
// catalog, dynamics) is built on these values.

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gaugeforge {

enum class NodeKind {
    Constant,
    Symbol,     // one of the reserved names x, t, xdot, xddot
    Parameter,  // any other identifier; a free real constant
    Sum,        // n-ary
    Product,    // n-ary
    Power,      // base ^ exponent (exponent may be any expression)
    Negation,
    Quotient,
    FunctionCall,
};

enum class UnaryFn { Sin, Cos, Tan, Exp, Ln, Sinh, Cosh, Tanh, Sqrt };

std::string_view fn_name(UnaryFn fn);

namespace reserved {
inline constexpr std::string_view x = "x";
inline constexpr std::string_view t = "t";
inline constexpr std::string_view xdot = "xdot";
inline constexpr std::string_view xddot = "xddot";
bool is_reserved(std::string_view name);
}  // namespace reserved

// Constant payload. Integer literals and their arithmetic stay exact
// (int64 rationals) so table coefficients like eps/3 fold without rounding;
// anything irrational degrades to double. Doubles with integral values are
// normalized back to rationals, which keeps printing and reparsing stable.
class Numeric {
  public:
    Numeric() : Numeric(0.0) {}
    Numeric(double v);                       // NOLINT: implicit by design
    Numeric(long long num, long long den);   // reduced; den > 0 enforced
    static Numeric integer(long long n) { return Numeric(n, 1); }

    bool exact() const { return exact_; }
    long long num() const { return num_; }
    long long den() const { return den_; }
    double value() const;

    bool is_zero() const { return value() == 0.0; }
    bool is_one() const { return value() == 1.0; }
    bool is_integer() const;
    long long as_integer() const;  // requires is_integer()

    Numeric operator-() const;
    Numeric operator+(const Numeric& o) const;
    Numeric operator*(const Numeric& o) const;
    Numeric reciprocal() const;  // throws on zero
    Numeric pow(const Numeric& e) const;

    // Total order: by value, ties broken by representation.
    static int compare(const Numeric& a, const Numeric& b);
    bool operator==(const Numeric& o) const { return compare(*this, o) == 0; }

    std::string str() const;

  private:
    bool exact_;
    long long num_ = 0, den_ = 1;  // exact case, gcd-reduced, den > 0
    double dbl_ = 0.0;             // inexact case
};

class Expr;
using ExprList = std::vector<Expr>;

namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
Expr make_expr(NodePtr node);
}  // namespace detail

// Value handle over an immutable shared node. Copies are cheap; all
// operations are pure, so expressions can be shared across threads freely.
class Expr {
  public:
    Expr();  // the constant 0

    static Expr constant(Numeric v);
    static Expr integer(long long n) { return constant(Numeric::integer(n)); }
    static Expr variable(std::string name);  // Symbol or Parameter by name
    static Expr sum(ExprList terms);
    static Expr product(ExprList factors);
    static Expr power(Expr base, Expr exponent);
    static Expr negation(Expr e);
    static Expr quotient(Expr num, Expr den);
    static Expr call(UnaryFn fn, Expr arg);

    NodeKind kind() const;
    const Numeric& number() const;       // Constant only
    const std::string& name() const;     // Symbol/Parameter only
    UnaryFn function() const;            // FunctionCall only
    std::span<const Expr> children() const;
    const Expr& child(std::size_t i) const { return children()[i]; }
    std::size_t arity() const { return children().size(); }

    bool is_constant() const { return kind() == NodeKind::Constant; }
    bool is_constant(double v) const;
    bool is_zero() const { return is_constant(0.0); }
    bool is_one() const { return is_constant(1.0); }

    bool contains(std::string_view name) const;
    std::set<std::string> names() const;
    std::size_t node_count() const;

    // Deterministic total order used for canonical sorting; 0 means
    // structurally equal.
    static int compare(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

    std::string str() const;

  private:
    explicit Expr(detail::NodePtr node) : node_(std::move(node)) {}
    friend Expr detail::make_expr(detail::NodePtr node);
    detail::NodePtr node_;
};

// Convenience builders used all over the catalog and the tests.
inline Expr num(double v) { return Expr::constant(Numeric(v)); }
inline Expr num(long long n, long long d) { return Expr::constant(Numeric(n, d)); }
inline Expr var(std::string name) { return Expr::variable(std::move(name)); }
Expr sym_x();
Expr sym_t();
Expr sym_xdot();
Expr sym_xddot();

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

inline Expr pow(Expr base, Expr exp) { return Expr::power(std::move(base), std::move(exp)); }
inline Expr sin(Expr e) { return Expr::call(UnaryFn::Sin, std::move(e)); }
inline Expr cos(Expr e) { return Expr::call(UnaryFn::Cos, std::move(e)); }
inline Expr tan(Expr e) { return Expr::call(UnaryFn::Tan, std::move(e)); }
inline Expr exp(Expr e) { return Expr::call(UnaryFn::Exp, std::move(e)); }
inline Expr ln(Expr e) { return Expr::call(UnaryFn::Ln, std::move(e)); }
inline Expr sinh(Expr e) { return Expr::call(UnaryFn::Sinh, std::move(e)); }
inline Expr cosh(Expr e) { return Expr::call(UnaryFn::Cosh, std::move(e)); }
inline Expr tanh(Expr e) { return Expr::call(UnaryFn::Tanh, std::move(e)); }
inline Expr sqrt(Expr e) { return Expr::call(UnaryFn::Sqrt, std::move(e)); }

// Raised by constant folding on domain violations (division by the constant
// zero, ln of a non-positive constant, ...).
class ExprDomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string format_double(double v);  // shortest representation that reparses exactly

}  // namespace gaugeforge
