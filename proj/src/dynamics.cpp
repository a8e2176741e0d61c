#include "gaugeforge/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gaugeforge/diff.hpp"
#include "gaugeforge/simplify.hpp"

namespace gaugeforge {

namespace {

const std::vector<std::string> kStateSlots = {"t", "x", "xdot"};

double grid_time(double t0, double dt, std::size_t i) {
    return t0 + static_cast<double>(i) * dt;
}

// Evaluator over (t, x, v) with parameters baked in.
class StateFn {
  public:
    StateFn(const Expr& e, const Binding& b) : fn_(e, kStateSlots, b) {}

    double operator()(double t, double x, double v) const {
        const double vals[3] = {t, x, v};
        return fn_(std::span<const double>(vals, 3));
    }

    double operator()(const Trajectory::Sample& s) const { return (*this)(s.t, s.x, s.v); }

  private:
    CompiledExpr fn_;
};

}  // namespace

ExplicitODE equation_of_motion(const Lagrangian& L, const Binding& b) {
    const Expr el = euler_lagrange(L);
    const Expr a = simplify(diff(el, reserved::xddot));
    if (a.contains(reserved::xddot))
        throw NonlinearAccelerationError(
            "equation of motion is not affine in the acceleration: " + el.str());
    if (a.is_zero())
        throw DegenerateLagrangianError(
            "no acceleration term in the equation of motion of '" + L.body().str() +
            "'; the Lagrangian defines no dynamics");
    const Expr xdd = Expr::variable(std::string(reserved::xddot));
    const Expr rest = simplify(el - a * xdd);
    if (rest.contains(reserved::xddot))
        throw NonlinearAccelerationError(
            "acceleration terms survive extraction from: " + el.str());
    Expr rhs = simplify(-(rest / a));
    return ExplicitODE{std::move(rhs), L, b};
}

Trajectory integrate_rk4(const ExplicitODE& ode, double x0, double v0,
                         double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be positive");
    if (!(t1 > t0)) throw std::invalid_argument("integrate_rk4: need t1 > t0");
    if (ode.rhs.contains(reserved::xddot))
        throw std::invalid_argument("integrate_rk4: rhs still contains the acceleration");

    const StateFn f(ode.rhs, ode.binding);

    const double raw = (t1 - t0) / dt;
    const double rounded = std::nearbyint(raw);
    const double ulp = std::nextafter(raw, std::numeric_limits<double>::infinity()) - raw;
    const bool even_window = rounded >= 1.0 && std::fabs(raw - rounded) <= ulp;
    const std::size_t full_steps =
        even_window ? static_cast<std::size_t>(rounded) : static_cast<std::size_t>(raw);

    Trajectory traj;
    traj.t0 = t0;
    traj.t1 = t1;
    traj.dt = dt;
    traj.uniform = even_window;

    double x = x0;
    double v = v0;
    traj.samples.reserve(full_steps + 2);
    traj.samples.push_back({t0, x, v});

    auto step = [&](double t, double h) {
        try {
            const double k1x = v;
            const double k1v = f(t, x, v);
            const double k2x = v + 0.5 * h * k1v;
            const double k2v = f(t + 0.5 * h, x + 0.5 * h * k1x, v + 0.5 * h * k1v);
            const double k3x = v + 0.5 * h * k2v;
            const double k3v = f(t + 0.5 * h, x + 0.5 * h * k2x, v + 0.5 * h * k2v);
            const double k4x = v + h * k3v;
            const double k4v = f(t + h, x + h * k3x, v + h * k3v);
            x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        } catch (const EvalError& err) {
            throw DynamicsError("integration aborted at t=" + std::to_string(t) + ": " +
                                err.what());
        }
    };

    for (std::size_t i = 0; i < full_steps; ++i) {
        step(grid_time(t0, dt, i), dt);
        const bool last = even_window && i + 1 == full_steps;
        traj.samples.push_back({last ? t1 : grid_time(t0, dt, i + 1), x, v});
    }
    if (!even_window) {
        const double tail = t1 - grid_time(t0, dt, full_steps);
        step(grid_time(t0, dt, full_steps), tail);
        traj.samples.push_back({t1, x, v});
    }
    return traj;
}

double action(const Lagrangian& L, const Trajectory& traj, const Binding& b) {
    if (traj.samples.size() < 3)
        throw std::invalid_argument("action: need at least three samples");
    if (!traj.uniform)
        throw std::invalid_argument("action: Simpson quadrature needs a uniform grid");
    const std::size_t n = traj.samples.size() - 1;
    if (n % 2 != 0)
        throw std::invalid_argument("action: Simpson quadrature needs an even interval count, got " +
                                    std::to_string(n));

    const StateFn f(L.body(), b);
    double acc = f(traj.samples[0]) + f(traj.samples[n]);
    for (std::size_t i = 1; i < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(traj.samples[i]);
    return traj.dt / 3.0 * acc;
}

ActionBoundaryReport verify_action_boundary(const GaugeFunction& phi, const Trajectory& traj,
                                            const Binding& b) {
    ActionBoundaryReport rep;
    rep.integral = action(null_from_gauge(phi), traj, b);

    Binding point = b;
    const auto& first = traj.samples.front();
    const auto& last = traj.samples.back();
    point["x"] = last.x;
    point["t"] = last.t;
    const double phi_end = eval(phi.body(), point);
    point["x"] = first.x;
    point["t"] = first.t;
    const double phi_start = eval(phi.body(), point);

    rep.boundary = phi_end - phi_start;
    rep.delta = std::fabs(rep.integral - rep.boundary);
    const double dt4 = traj.dt * traj.dt * traj.dt * traj.dt;
    rep.tolerance = std::max(1e-8, 10.0 * dt4);
    rep.passed = rep.delta <= rep.tolerance;
    return rep;
}

double energy_drift(const Lagrangian& L, const Trajectory& traj, const Binding& b) {
    if (traj.samples.empty()) return 0.0;
    const StateFn energy(energy_function(L), b);
    const double e0 = energy(traj.samples.front());
    double drift = 0.0;
    for (const auto& s : traj.samples) drift = std::max(drift, std::fabs(energy(s) - e0));
    return drift;
}

EnergyBalanceReport energy_balance_check(const Lagrangian& L, const Trajectory& traj,
                                         const Binding& b) {
    if (traj.samples.size() < 3)
        throw std::invalid_argument("energy_balance_check: need at least three samples");
    if (!traj.uniform)
        throw std::invalid_argument("energy_balance_check: needs a uniform grid");

    const StateFn energy(energy_function(L), b);
    const StateFn l_t(simplify(diff(L.body(), reserved::t)), b);

    EnergyBalanceReport rep;
    rep.tolerance = std::max(1e-6, 10.0 * traj.dt * traj.dt);

    std::vector<double> e(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) e[i] = energy(traj.samples[i]);

    for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
        const double lhs = (e[i + 1] - e[i - 1]) / (2.0 * traj.dt);
        const double rhs = -l_t(traj.samples[i]);
        rep.max_mismatch = std::max(rep.max_mismatch, std::fabs(lhs - rhs));
    }
    rep.passed = rep.max_mismatch <= rep.tolerance;
    return rep;
}

namespace {

void csv_row(std::ostream& out, std::initializer_list<double> vals) {
    char buf[32];
    bool sep = false;
    for (double v : vals) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (sep) out << ',';
        out << buf;
        sep = true;
    }
    out << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,x,v\n";
    for (const auto& s : traj.samples) csv_row(out, {s.t, s.x, s.v});
}

void write_csv(std::ostream& out, const Trajectory& traj, const Expr& energy, const Binding& b) {
    const StateFn e_fn(energy, b);
    out << "t,x,v,E\n";
    for (const auto& s : traj.samples) csv_row(out, {s.t, s.x, s.v, e_fn(s)});
}

double estimate_period(const Trajectory& traj) {
    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const auto& a = traj.samples[i];
        const auto& c = traj.samples[i + 1];
        if (a.x >= 0.0 && c.x < 0.0) {
            const double frac = a.x / (a.x - c.x);
            crossings.push_back(a.t + frac * (c.t - a.t));
        }
    }
    if (crossings.size() < 2)
        throw DynamicsError("estimate_period: fewer than two downward zero crossings");
    return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

}  // namespace gaugeforge
