#pragma once

// Numerical side of the library: explicit equations of motion extracted
// from Lagrangians, fixed-step RK4 integration, action integrals, and the
// boundary-term and energy-balance identities checked on trajectories.

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaugeforge/eval.hpp"
#include "gaugeforge/mechanics.hpp"

namespace gaugeforge {

class DynamicsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// The Euler-Lagrange expression has no acceleration-linear part, so no
// explicit ODE exists (a purely null Lagrangian, for instance, constrains
// nothing).
class DegenerateLagrangianError : public DynamicsError {
  public:
    using DynamicsError::DynamicsError;
};

// The Euler-Lagrange expression is not affine in the acceleration. Cannot
// happen for Lagrangians over {xdot, x, t}; kept as a guard.
class NonlinearAccelerationError : public DynamicsError {
  public:
    using DynamicsError::DynamicsError;
};

// xddot = rhs(xdot, x, t), with parameter values supplied by `binding`.
struct ExplicitODE {
    Expr rhs;
    Lagrangian source;
    Binding binding;
};

// Uniformly sampled solution curve. `uniform` is false only when the
// integration window was not an integer number of steps and the final step
// had to be shortened; such trajectories cannot feed Simpson quadrature.
struct Trajectory {
    struct Sample {
        double t = 0.0;
        double x = 0.0;
        double v = 0.0;
    };

    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.0;
    std::vector<Sample> samples;
    std::string method = "rk4";
    bool uniform = true;
};

// Solve EL(L) = A*xddot + B for xddot. Throws DegenerateLagrangianError
// when A is identically zero and NonlinearAccelerationError if the
// extraction leaves acceleration terms behind.
ExplicitODE equation_of_motion(const Lagrangian& L, const Binding& b = {});

// Classical fourth-order Runge-Kutta on (x', v') = (v, rhs). The grid is
// t0 + i*dt with the last sample pinned to t1; a non-integral window gets
// one shortened final step and the trajectory is marked non-uniform.
// Evaluation failures mid-run abort with the failing time in the message.
Trajectory integrate_rk4(const ExplicitODE& ode, double x0, double v0,
                         double t0, double t1, double dt);

// Composite-Simpson quadrature of L along the trajectory. Requires a
// uniform grid with an even interval count and at least three samples.
double action(const Lagrangian& L, const Trajectory& traj, const Binding& b = {});

struct ActionBoundaryReport {
    double integral = 0.0;   // action of the induced null Lagrangian
    double boundary = 0.0;   // phi at the endpoints, differenced
    double delta = 0.0;      // |integral - boundary|
    double tolerance = 0.0;
    bool passed = false;
};

// A total time derivative integrates to its boundary values: checks
// |action(d(phi)/dt) - (phi(x1,t1) - phi(x0,t0))| <= max(1e-8, 10*dt^4).
// The constant 10 covers the composite-Simpson error for smooth gauges
// with two orders of headroom (measured constants sit below 0.1).
ActionBoundaryReport verify_action_boundary(const GaugeFunction& phi,
                                            const Trajectory& traj,
                                            const Binding& b = {});

// max over samples of |E(t) - E(t0)| with E the energy function of L.
double energy_drift(const Lagrangian& L, const Trajectory& traj, const Binding& b = {});

struct EnergyBalanceReport {
    double max_mismatch = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

// dE/dt = -dL/dt along solutions: compares a centered difference of E
// against -dL/dt at interior samples, tolerance max(1e-6, 10*dt^2). The
// constant 10 covers the finite-difference truncation term on the systems
// this library targets (measured constants sit below 1).
EnergyBalanceReport energy_balance_check(const Lagrangian& L, const Trajectory& traj,
                                         const Binding& b = {});

// CSV with header t,x,v and one row per sample, 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);

// Same, with a fourth column E computed from the given energy expression.
void write_csv(std::ostream& out, const Trajectory& traj, const Expr& energy,
               const Binding& b);

// Mean spacing of downward zero crossings of x(t), located by linear
// interpolation. Needs at least two crossings.
double estimate_period(const Trajectory& traj);

}  // namespace gaugeforge
