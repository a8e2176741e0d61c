#pragma once

// Deterministic canonical form: constants folded (exactly, where rational),
// 0/1 identities applied, sums and products flattened and ordered by the
// node total order, like terms collected, like powers of identical bases
// merged, products distributed over sum factors that involve the dynamical
// variables (powers of sums stay folded; parameter-only sums stay factored
// so coefficient ratios cancel). Value-preserving; no trigonometric
// rewriting (those equivalences are certified numerically instead, see
// eval.hpp).

#include "gaugeforge/expr.hpp"

namespace gaugeforge {

Expr simplify(const Expr& e);

// Canonical trees contain no Negation or Quotient nodes; both normalize
// into products ((-1)*e and a*b^-1).
bool is_canonical_zero(const Expr& e);

}  // namespace gaugeforge
