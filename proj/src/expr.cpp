#include "gaugeforge/expr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace gaugeforge {

// ---------------------------------------------------------------------------
// Numeric

namespace {

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

bool mul_overflows(long long a, long long b, long long& out) {
    __int128 r = static_cast<__int128>(a) * b;
    if (r > INT64_MAX || r < INT64_MIN) return true;
    out = static_cast<long long>(r);
    return false;
}

bool add_overflows(long long a, long long b, long long& out) {
    __int128 r = static_cast<__int128>(a) + b;
    if (r > INT64_MAX || r < INT64_MIN) return true;
    out = static_cast<long long>(r);
    return false;
}

}  // namespace

Numeric::Numeric(double v) {
    if (!std::isfinite(v)) throw ExprDomainError("non-finite constant");
    if (v == 0.0) v = 0.0;  // normalize -0
    // Values sitting on a small power-of-two grid (integers, halves,
    // quarters, ... down to 1/64) become exact rationals so coefficient
    // arithmetic like 0.75*F0*... folds without rounding. Anything finer
    // (0.1, pi, ...) stays a double and prints via format_double.
    for (long long den = 1; den <= 64; den *= 2) {
        double scaled = v * static_cast<double>(den);
        if (std::nearbyint(scaled) == scaled && std::fabs(scaled) <= kMaxExactInteger) {
            exact_ = true;
            num_ = static_cast<long long>(scaled);
            den_ = den;
            return;
        }
    }
    exact_ = false;
    dbl_ = v;
}

Numeric::Numeric(long long num, long long den) {
    if (den == 0) throw ExprDomainError("division by the constant zero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    exact_ = true;
    num_ = num;
    den_ = den;
}

double Numeric::value() const {
    return exact_ ? static_cast<double>(num_) / static_cast<double>(den_) : dbl_;
}

bool Numeric::is_integer() const { return exact_ && den_ == 1; }

long long Numeric::as_integer() const {
    if (!is_integer()) throw std::logic_error("Numeric::as_integer on non-integer");
    return num_;
}

Numeric Numeric::operator-() const {
    if (exact_ && num_ != INT64_MIN) return Numeric(-num_, den_);
    return Numeric(-value());
}

Numeric Numeric::operator+(const Numeric& o) const {
    if (exact_ && o.exact_) {
        long long n1, n2, n, d;
        if (!mul_overflows(num_, o.den_, n1) && !mul_overflows(o.num_, den_, n2) &&
            !add_overflows(n1, n2, n) && !mul_overflows(den_, o.den_, d)) {
            return Numeric(n, d);
        }
    }
    return Numeric(value() + o.value());
}

Numeric Numeric::operator*(const Numeric& o) const {
    if (exact_ && o.exact_) {
        // cross-reduce first to keep intermediates small
        long long g1 = std::gcd(num_ < 0 ? -num_ : num_, o.den_);
        long long g2 = std::gcd(o.num_ < 0 ? -o.num_ : o.num_, den_);
        long long a = num_ / g1, b = o.num_ / g2;
        long long c = den_ / g2, d = o.den_ / g1;
        long long n, m;
        if (!mul_overflows(a, b, n) && !mul_overflows(c, d, m)) return Numeric(n, m);
    }
    return Numeric(value() * o.value());
}

Numeric Numeric::reciprocal() const {
    if (is_zero()) throw ExprDomainError("division by the constant zero");
    if (exact_) return Numeric(den_, num_);
    return Numeric(1.0 / dbl_);
}

Numeric Numeric::pow(const Numeric& e) const {
    if (e.is_integer()) {
        long long k = e.as_integer();
        if (k == 0) return Numeric::integer(1);
        if (exact_) {
            bool invert = k < 0;
            unsigned long long expn = invert ? -static_cast<unsigned long long>(k) : k;
            if (invert && is_zero()) throw ExprDomainError("division by the constant zero");
            if (expn <= 62) {
                long long rn = 1, rd = 1;
                bool ok = true;
                for (unsigned long long i = 0; i < expn && ok; ++i)
                    ok = !mul_overflows(rn, num_, rn) && !mul_overflows(rd, den_, rd);
                if (ok) return invert ? Numeric(rd, rn) : Numeric(rn, rd);
            }
        }
    }
    double r = std::pow(value(), e.value());
    if (!std::isfinite(r)) {
        if (is_zero() && e.value() < 0) throw ExprDomainError("division by the constant zero");
        throw ExprDomainError("constant power has no finite value");
    }
    return Numeric(r);
}

int Numeric::compare(const Numeric& a, const Numeric& b) {
    double va = a.value(), vb = b.value();
    if (va < vb) return -1;
    if (va > vb) return 1;
    if (a.exact_ != b.exact_) return a.exact_ ? -1 : 1;
    if (a.exact_) {
        if (a.num_ != b.num_) return a.num_ < b.num_ ? -1 : 1;
        if (a.den_ != b.den_) return a.den_ < b.den_ ? -1 : 1;
        return 0;
    }
    return 0;  // same double value
}

std::string Numeric::str() const {
    if (exact_) {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }
    return format_double(dbl_);
}

std::string format_double(double v) {
    // Shortest %.g form whose strtod round trip is exact.
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Expr nodes

namespace detail {
struct ExprNode {
    NodeKind kind;
    Numeric number;        // Constant
    std::string name;      // Symbol / Parameter
    UnaryFn fn{};          // FunctionCall
    std::vector<Expr> children;
};
}  // namespace detail

using detail::ExprNode;

namespace detail {
Expr make_expr(NodePtr node) { return Expr(std::move(node)); }
}  // namespace detail

namespace {

Expr make_node(ExprNode&& n) {
    return detail::make_expr(std::make_shared<const ExprNode>(std::move(n)));
}

int kind_rank(NodeKind k) {
    switch (k) {
        case NodeKind::Constant: return 0;
        case NodeKind::Symbol: return 1;
        case NodeKind::Parameter: return 2;
        case NodeKind::FunctionCall: return 3;
        case NodeKind::Power: return 4;
        case NodeKind::Product: return 5;
        case NodeKind::Sum: return 6;
        case NodeKind::Negation: return 7;
        case NodeKind::Quotient: return 8;
    }
    return 9;
}

const Expr& zero_expr() {
    static const Expr z = Expr::constant(Numeric::integer(0));
    return z;
}

}  // namespace

std::string_view fn_name(UnaryFn fn) {
    switch (fn) {
        case UnaryFn::Sin: return "sin";
        case UnaryFn::Cos: return "cos";
        case UnaryFn::Tan: return "tan";
        case UnaryFn::Exp: return "exp";
        case UnaryFn::Ln: return "ln";
        case UnaryFn::Sinh: return "sinh";
        case UnaryFn::Cosh: return "cosh";
        case UnaryFn::Tanh: return "tanh";
        case UnaryFn::Sqrt: return "sqrt";
    }
    return "?";
}

namespace reserved {
bool is_reserved(std::string_view name) {
    return name == x || name == t || name == xdot || name == xddot;
}
}  // namespace reserved

Expr::Expr() : node_() { *this = zero_expr(); }

Expr Expr::constant(Numeric v) {
    return make_node({.kind = NodeKind::Constant, .number = v});
}

Expr Expr::variable(std::string name) {
    if (name.empty()) throw std::invalid_argument("empty variable name");
    NodeKind k = reserved::is_reserved(name) ? NodeKind::Symbol : NodeKind::Parameter;
    return make_node({.kind = k, .name = std::move(name)});
}

Expr Expr::sum(ExprList terms) {
    if (terms.empty()) return zero_expr();
    if (terms.size() == 1) return terms.front();
    return make_node({.kind = NodeKind::Sum, .children = std::move(terms)});
}

Expr Expr::product(ExprList factors) {
    if (factors.empty()) return constant(Numeric::integer(1));
    if (factors.size() == 1) return factors.front();
    return make_node({.kind = NodeKind::Product, .children = std::move(factors)});
}

Expr Expr::power(Expr base, Expr exponent) {
    return make_node({.kind = NodeKind::Power, .children = {std::move(base), std::move(exponent)}});
}

Expr Expr::negation(Expr e) {
    return make_node({.kind = NodeKind::Negation, .children = {std::move(e)}});
}

Expr Expr::quotient(Expr n, Expr d) {
    return make_node({.kind = NodeKind::Quotient, .children = {std::move(n), std::move(d)}});
}

Expr Expr::call(UnaryFn fn, Expr arg) {
    return make_node({.kind = NodeKind::FunctionCall, .fn = fn, .children = {std::move(arg)}});
}

NodeKind Expr::kind() const { return node_->kind; }
const Numeric& Expr::number() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }
UnaryFn Expr::function() const { return node_->fn; }
std::span<const Expr> Expr::children() const { return node_->children; }

bool Expr::is_constant(double v) const {
    return kind() == NodeKind::Constant && number().value() == v;
}

bool Expr::contains(std::string_view name) const {
    if (kind() == NodeKind::Symbol || kind() == NodeKind::Parameter) return node_->name == name;
    for (const Expr& c : children())
        if (c.contains(name)) return true;
    return false;
}

std::set<std::string> Expr::names() const {
    std::set<std::string> out;
    struct Walk {
        std::set<std::string>& out;
        void operator()(const Expr& e) {
            if (e.kind() == NodeKind::Symbol || e.kind() == NodeKind::Parameter) out.insert(e.name());
            for (const Expr& c : e.children()) (*this)(c);
        }
    } walk{out};
    walk(*this);
    return out;
}

std::size_t Expr::node_count() const {
    std::size_t n = 1;
    for (const Expr& c : children()) n += c.node_count();
    return n;
}

int Expr::compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case NodeKind::Constant:
            return Numeric::compare(a.number(), b.number());
        case NodeKind::Symbol:
        case NodeKind::Parameter:
            return a.name().compare(b.name());
        case NodeKind::FunctionCall:
            if (a.function() != b.function())
                return static_cast<int>(a.function()) < static_cast<int>(b.function()) ? -1 : 1;
            return compare(a.child(0), b.child(0));
        default: {
            auto ca = a.children(), cb = b.children();
            std::size_t n = std::min(ca.size(), cb.size());
            for (std::size_t i = 0; i < n; ++i)
                if (int c = compare(ca[i], cb[i]); c != 0) return c;
            if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
            return 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Printer. Emits the same surface grammar the parser accepts; minimal
// parentheses under the precedence sum(1) < product/quotient(2) < power(3).

namespace {

int precedence(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Sum: return 1;
        case NodeKind::Product:
        case NodeKind::Quotient:
        case NodeKind::Negation: return 2;
        case NodeKind::Power: return 3;
        case NodeKind::Constant: {
            const Numeric& v = e.number();
            if (v.exact() && v.den() != 1) return 2;  // prints as n/d
            return v.value() < 0 ? 2 : 4;             // leading minus
        }
        default: return 4;
    }
}

// True when the printed form starts with a unary minus.
bool negative_leading(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Constant: return e.number().value() < 0;
        case NodeKind::Negation: return true;
        case NodeKind::Product:
        case NodeKind::Quotient: return e.arity() > 0 && negative_leading(e.child(0));
        default: return false;
    }
}

void print(std::string& out, const Expr& e);

void print_wrapped(std::string& out, const Expr& e, int min_prec, bool forbid_leading_minus = false) {
    bool parens = precedence(e) < min_prec || (forbid_leading_minus && negative_leading(e));
    if (parens) out += '(';
    print(out, e);
    if (parens) out += ')';
}

void print(std::string& out, const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Constant:
            out += e.number().str();
            break;
        case NodeKind::Symbol:
        case NodeKind::Parameter:
            out += e.name();
            break;
        case NodeKind::Sum: {
            bool first = true;
            for (const Expr& term : e.children()) {
                if (!first && negative_leading(term)) {
                    // reuse the term's own minus sign as the separator
                    out += " - ";
                    std::string body;
                    print(body, term);
                    out += body.substr(1);
                } else {
                    if (!first) out += " + ";
                    print_wrapped(out, term, 2);
                }
                first = false;
            }
            break;
        }
        case NodeKind::Product: {
            std::span<const Expr> fs = e.children();
            std::size_t start = 0;
            if (fs.size() >= 2 && fs[0].kind() == NodeKind::Constant && fs[0].number().value() == -1.0) {
                out += '-';  // elide a -1 coefficient
                start = 1;
            }
            for (std::size_t i = start; i < fs.size(); ++i) {
                if (i > start) out += '*';
                print_wrapped(out, fs[i], i == start ? 2 : 3, i > start || start == 1);
            }
            break;
        }
        case NodeKind::Quotient:
            print_wrapped(out, e.child(0), 2);
            out += '/';
            print_wrapped(out, e.child(1), 3, true);
            break;
        case NodeKind::Negation:
            out += '-';
            print_wrapped(out, e.child(0), 3);
            break;
        case NodeKind::Power: {
            print_wrapped(out, e.child(0), 4);
            out += '^';
            // The grammar allows a unary minus directly in exponent position,
            // but only for a single trailing factor: -2, -2.5, -t, -t^2.
            const Expr& ex = e.child(1);
            bool bare = precedence(ex) >= 3;
            if (ex.kind() == NodeKind::Constant && !(ex.number().exact() && ex.number().den() != 1))
                bare = true;
            if (ex.kind() == NodeKind::Negation && precedence(ex.child(0)) >= 3) bare = true;
            if (bare) {
                print(out, ex);
            } else {
                out += '(';
                print(out, ex);
                out += ')';
            }
            break;
        }
        case NodeKind::FunctionCall:
            out += fn_name(e.function());
            out += '(';
            print(out, e.child(0));
            out += ')';
            break;
    }
}

}  // namespace

std::string Expr::str() const {
    std::string out;
    print(out, *this);
    return out;
}

// ---------------------------------------------------------------------------
// Convenience builders

Expr sym_x() { return Expr::variable(std::string(reserved::x)); }
Expr sym_t() { return Expr::variable(std::string(reserved::t)); }
Expr sym_xdot() { return Expr::variable(std::string(reserved::xdot)); }
Expr sym_xddot() { return Expr::variable(std::string(reserved::xddot)); }

Expr operator+(Expr a, Expr b) { return Expr::sum({std::move(a), std::move(b)}); }
Expr operator-(Expr a, Expr b) { return Expr::sum({std::move(a), Expr::negation(std::move(b))}); }
Expr operator*(Expr a, Expr b) { return Expr::product({std::move(a), std::move(b)}); }
Expr operator/(Expr a, Expr b) { return Expr::quotient(std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::negation(std::move(a)); }

}  // namespace gaugeforge
