#include "gaugeforge/eval.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <set>

namespace gaugeforge {
namespace {

double apply_fn(UnaryFn fn, double v, const Expr& at) {
    switch (fn) {
        case UnaryFn::Sin: return std::sin(v);
        case UnaryFn::Cos: return std::cos(v);
        case UnaryFn::Tan: return std::tan(v);
        case UnaryFn::Exp: return std::exp(v);
        case UnaryFn::Ln:
            if (v <= 0.0) throw EvalError("logarithm of a non-positive value", at);
            return std::log(v);
        case UnaryFn::Sinh: return std::sinh(v);
        case UnaryFn::Cosh: return std::cosh(v);
        case UnaryFn::Tanh: return std::tanh(v);
        case UnaryFn::Sqrt:
            if (v < 0.0) throw EvalError("square root of a negative value", at);
            return std::sqrt(v);
    }
    throw EvalError("unknown function", at);
}

double checked_pow(double base, double expo, const Expr& at) {
    double r = std::pow(base, expo);
    if (std::isnan(r) || std::isinf(r)) {
        if (base == 0.0 && expo < 0.0)
            throw EvalError("zero raised to a negative power", at);
        if (base < 0.0)
            throw EvalError("negative base with non-integer exponent", at);
        throw EvalError("power overflow", at);
    }
    return r;
}

}  // namespace

double eval(const Expr& e, const Binding& b) {
    switch (e.kind()) {
        case NodeKind::Constant:
            return e.number().value();
        case NodeKind::Symbol:
        case NodeKind::Parameter: {
            auto it = b.find(e.name());
            if (it == b.end()) throw EvalError("unbound name '" + e.name() + "'", e);
            return it->second;
        }
        case NodeKind::Sum: {
            double acc = 0.0;
            for (const Expr& c : e.children()) acc += eval(c, b);
            return acc;
        }
        case NodeKind::Product: {
            double acc = 1.0;
            for (const Expr& c : e.children()) acc *= eval(c, b);
            return acc;
        }
        case NodeKind::Power:
            return checked_pow(eval(e.child(0), b), eval(e.child(1), b), e);
        case NodeKind::Negation:
            return -eval(e.child(0), b);
        case NodeKind::Quotient: {
            double den = eval(e.child(1), b);
            if (den == 0.0) throw EvalError("division by zero", e);
            return eval(e.child(0), b) / den;
        }
        case NodeKind::FunctionCall:
            return apply_fn(e.function(), eval(e.child(0), b), e);
    }
    throw EvalError("unknown node", e);
}

DomainMap default_domains(std::initializer_list<Expr> exprs) {
    DomainMap d;
    for (const Expr& e : exprs) {
        for (const std::string& n : e.names()) {
            if (reserved::is_reserved(n))
                d[n] = Interval{-3.0, 3.0};
            else
                d[n] = Interval{-2.0, 2.0};
        }
    }
    return d;
}

ComparisonResult compare_numeric(const Expr& e1, const Expr& e2, const DomainMap& domains,
                                 int samples, double tol, std::uint64_t seed) {
    ComparisonResult r;
    // Free names must all be covered by the domain map, otherwise eval
    // throws on the first sample; collect them up front for a clearer error.
    std::set<std::string> free_names;
    for (const std::string& n : e1.names()) free_names.insert(n);
    for (const std::string& n : e2.names()) free_names.insert(n);
    for (const std::string& n : free_names) {
        if (!domains.count(n)) {
            r.diagnostic = "no domain for name '" + n + "'";
            return r;
        }
    }

    std::mt19937_64 rng(seed);
    r.equal = true;
    for (int i = 0; i < samples; ++i) {
        Binding b;
        // DomainMap is ordered, so the draw sequence is reproducible.
        for (const auto& [name, iv] : domains) {
            if (iv.lo == iv.hi) {
                b[name] = iv.lo;
                // Keep the stream aligned whether or not the interval is a point.
                std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            } else {
                b[name] = std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng);
            }
        }
        double v1 = 0.0, v2 = 0.0;
        try {
            v1 = eval(e1, b);
            v2 = eval(e2, b);
        } catch (const EvalError& err) {
            r.equal = false;
            r.diagnostic = std::string("sample ") + std::to_string(i) + ": " + err.what();
            return r;
        }
        double diff = std::abs(v1 - v2);
        if (diff > r.max_diff) r.max_diff = diff;
        double scale = 1.0 + std::max(std::abs(v1), std::abs(v2));
        ++r.samples_run;
        if (diff > tol * scale) {
            r.equal = false;
            std::string where;
            for (const auto& [name, val] : b)
                where += (where.empty() ? "" : ", ") + name + "=" + format_double(val);
            r.diagnostic = "values differ by " + format_double(diff) + " at " + where;
            return r;
        }
    }
    return r;
}

bool equal_numeric(const Expr& e1, const Expr& e2, const DomainMap& domains, int samples,
                   double tol, std::uint64_t seed) {
    return compare_numeric(e1, e2, domains, samples, tol, seed).equal;
}

bool equal_numeric(const Expr& e1, const Expr& e2) {
    return equal_numeric(e1, e2, default_domains({e1, e2}));
}

CompiledExpr::CompiledExpr(const Expr& e, std::span<const std::string> slots,
                           const Binding& fixed)
    : root_(e) {
    // Depth of the evaluation stack is tracked during compilation so the
    // runtime buffer never reallocates.
    std::size_t depth = 0;
    auto emit = [&](Instr in, int pushes) {
        program_.push_back(in);
        depth = std::size_t(std::ptrdiff_t(depth) + pushes);
        if (depth > stack_need_) stack_need_ = depth;
    };

    // Recursive postfix emission.
    auto compile = [&](auto&& self, const Expr& n) -> void {
        switch (n.kind()) {
            case NodeKind::Constant:
                emit({Op::PushConst, n.number().value()}, 1);
                return;
            case NodeKind::Symbol:
            case NodeKind::Parameter: {
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    if (slots[i] == n.name()) {
                        Instr in{Op::PushSlot};
                        in.slot = int(i);
                        emit(in, 1);
                        return;
                    }
                }
                auto it = fixed.find(n.name());
                if (it == fixed.end())
                    throw EvalError("unbound name '" + n.name() + "'", n);
                emit({Op::PushConst, it->second}, 1);
                return;
            }
            case NodeKind::Sum:
                if (n.arity() == 0) { emit({Op::PushConst, 0.0}, 1); return; }
                self(self, n.child(0));
                for (std::size_t i = 1; i < n.arity(); ++i) {
                    self(self, n.child(i));
                    emit({Op::Add}, -1);
                }
                return;
            case NodeKind::Product:
                if (n.arity() == 0) { emit({Op::PushConst, 1.0}, 1); return; }
                self(self, n.child(0));
                for (std::size_t i = 1; i < n.arity(); ++i) {
                    self(self, n.child(i));
                    emit({Op::Mul}, -1);
                }
                return;
            case NodeKind::Power:
                self(self, n.child(0));
                self(self, n.child(1));
                emit({Op::Pow}, -1);
                return;
            case NodeKind::Negation:
                self(self, n.child(0));
                emit({Op::Neg}, 0);
                return;
            case NodeKind::Quotient:
                self(self, n.child(0));
                self(self, n.child(1));
                emit({Op::Div}, -1);
                return;
            case NodeKind::FunctionCall: {
                self(self, n.child(0));
                Instr in{Op::Fn};
                in.fn = n.function();
                emit(in, 0);
                return;
            }
        }
        throw EvalError("unknown node", n);
    };
    compile(compile, e);
}

double CompiledExpr::operator()(std::span<const double> slot_values) const {
    // Small fixed buffer covers every expression the library builds; fall
    // back to the heap for pathological depth.
    double local[64];
    std::vector<double> heap;
    double* st = local;
    if (stack_need_ > 64) {
        heap.resize(stack_need_);
        st = heap.data();
    }
    std::size_t top = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
            case Op::PushConst: st[top++] = in.value; break;
            case Op::PushSlot: st[top++] = slot_values[std::size_t(in.slot)]; break;
            case Op::Add: --top; st[top - 1] += st[top]; break;
            case Op::Mul: --top; st[top - 1] *= st[top]; break;
            case Op::Pow:
                --top;
                st[top - 1] = checked_pow(st[top - 1], st[top], root_);
                break;
            case Op::Div:
                --top;
                if (st[top] == 0.0) throw EvalError("division by zero", root_);
                st[top - 1] /= st[top];
                break;
            case Op::Neg: st[top - 1] = -st[top - 1]; break;
            case Op::Fn: st[top - 1] = apply_fn(in.fn, st[top - 1], root_); break;
        }
    }
    return st[top - 1];
}

std::uint64_t default_seed() {
    if (const char* s = std::getenv("GAUGEFORGE_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0' && end != s) return v;
    }
    return kDefaultSeed;
}

}  // namespace gaugeforge
