#pragma once

// Numeric evaluation of expression trees, seeded random equivalence
// checking, and a small stack-machine compiler for the hot loops in the
// integrator.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gaugeforge/expr.hpp"

namespace gaugeforge {

// Name -> value. Evaluation fails loudly on any name present in the
// expression but absent from the binding.
using Binding = std::map<std::string, double>;

class EvalError : public std::runtime_error {
  public:
    EvalError(const std::string& what, const Expr& subtree)
        : std::runtime_error(what + " in '" + subtree.str() + "'"), subtree_(subtree) {}

    const Expr& subtree() const { return subtree_; }

  private:
    Expr subtree_;
};

double eval(const Expr& e, const Binding& b);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};
using DomainMap = std::map<std::string, Interval>;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kDefaultSamples = 100;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Reserved symbols get [-3, 3], parameters [-2, 2], for every name
// appearing in any of the given expressions.
DomainMap default_domains(std::initializer_list<Expr> exprs);

struct ComparisonResult {
    bool equal = false;
    double max_diff = 0.0;     // worst |e1 - e2| seen
    int samples_run = 0;
    std::string diagnostic;    // non-empty when a sample failed to evaluate
};

// Relative agreement |e1-e2| <= tol*(1 + max(|e1|,|e2|)) at every seeded
// pseudo-random sample of the domains. A sample that hits an evaluation
// domain error fails the comparison with a diagnostic instead of throwing.
ComparisonResult compare_numeric(const Expr& e1, const Expr& e2, const DomainMap& domains,
                                 int samples, double tol, std::uint64_t seed);

bool equal_numeric(const Expr& e1, const Expr& e2, const DomainMap& domains,
                   int samples = kDefaultSamples, double tol = kDefaultTol,
                   std::uint64_t seed = kDefaultSeed);

// Convenience form using default domains for every free name.
bool equal_numeric(const Expr& e1, const Expr& e2);

// Expression compiled to a postfix program over named slots; parameter
// values are baked in at compile time. Evaluation is allocation-free and
// raises the same EvalError domain failures as eval(), reported against
// the whole expression.
class CompiledExpr {
  public:
    CompiledExpr(const Expr& e, std::span<const std::string> slots, const Binding& fixed = {});

    double operator()(std::span<const double> slot_values) const;

  private:
    enum class Op : std::uint8_t { PushConst, PushSlot, Add, Mul, Pow, Div, Neg, Fn };
    struct Instr {
        Op op;
        double value = 0.0;  // PushConst
        int slot = 0;        // PushSlot
        UnaryFn fn{};        // Fn
    };
    Expr root_;
    std::vector<Instr> program_;
    std::size_t stack_need_ = 0;
};

// Process-wide default seed: GAUGEFORGE_SEED when set, else 42.
std::uint64_t default_seed();

}  // namespace gaugeforge
