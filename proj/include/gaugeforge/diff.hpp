#pragma once

// Exact symbolic partial derivatives and the total time derivative
// d/dt = d/dt + xdot*d/dx + xddot*d/dxdot. Parameters differentiate to zero.
// Results come back simplified.

#include <string_view>

#include "gaugeforge/expr.hpp"

namespace gaugeforge {

Expr diff(const Expr& e, std::string_view var);

// Requires e over {x, t, xdot} at most; rejects expressions containing xddot.
Expr total_time_derivative(const Expr& e);

}  // namespace gaugeforge
