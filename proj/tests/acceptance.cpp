// Acceptance gate for the whole library: eleven end-to-end checks, one
// pass/fail line each. Exit status is 0 only when every line passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gaugeforge/catalog.hpp"
#include "gaugeforge/cli.hpp"
#include "gaugeforge/diff.hpp"
#include "gaugeforge/dynamics.hpp"
#include "gaugeforge/eval.hpp"
#include "gaugeforge/mechanics.hpp"
#include "gaugeforge/parse.hpp"
#include "gaugeforge/simplify.hpp"
#include "test_support.hpp"

using namespace gaugeforge;
using testsupport::SpecGen;

namespace {

// Reference values, computed in long double from the closed forms before
// the integrator existed (see test_dynamics.cpp).
const double kResonanceX10 = -2.7201055544468491;  // 5 sin 10
const double kDuffingPeriod = 6.2597113894690774;  // 2 pi / 1.00375

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", v);
    return buf;
}

int g_failures = 0;

void run_criterion(int idx, const char* name, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome res;
    try {
        res = body();
    } catch (const std::exception& e) {
        res = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!res.ok) ++g_failures;
    std::printf("%s %2d  %-34s %s [%.2fs]\n", res.ok ? "PASS" : "FAIL", idx, name,
                res.detail.c_str(), secs);
    std::fflush(stdout);
}

// 200 seeded samples with t in [0,10], x in [-2,2], parameters pinned.
ComparisonResult sampled_match(const Expr& a, const Expr& b, const Binding& params) {
    DomainMap dom = default_domains({a, b});
    dom["t"] = {0.0, 10.0};
    dom["x"] = {-2.0, 2.0};
    for (const auto& [k, v] : params) dom[k] = {v, v};
    return compare_numeric(a, b, dom, 200, 1e-10, default_seed());
}

Outcome catalog_roundtrip(EntryKind want, int expect_entries) {
    double worst = 0.0;
    int checked = 0;
    for (const CatalogEntry& e : list_entries()) {
        if (e.kind != want) continue;
        ++checked;
        const Expr derived = force_from_gauge(e.phi, Sign::Plus);
        std::vector<Binding> bindings{e.defaults};
        if (e.id == "higher-order") {
            for (double n : {2.0, 3.0}) {
                Binding b = e.defaults;
                b["n"] = n;
                bindings.push_back(b);
            }
        }
        for (const Binding& b : bindings) {
            const ComparisonResult r = sampled_match(derived, e.declared, b);
            if (!r.equal)
                return {false, e.id + " mismatch, |diff| " + sci(r.max_diff) +
                                   (r.diagnostic.empty() ? "" : ", " + r.diagnostic)};
            worst = std::max(worst, r.max_diff);
        }
    }
    if (checked != expect_entries)
        return {false, "expected " + std::to_string(expect_entries) + " entries, saw " +
                           std::to_string(checked)};
    return {true, std::to_string(checked) + " entries, worst |diff| " + sci(worst)};
}

Trajectory integrate_entry(const char* id, const Binding& overrides, double x0, double v0,
                           double t1, double dt) {
    const CatalogEntry& e = lookup(id);
    Binding b = e.defaults;
    for (const auto& [k, v] : overrides) b[k] = v;
    const Lagrangian total = drive_with_gauge(default_standard_lagrangian(), e.phi);
    return integrate_rk4(equation_of_motion(total, b), x0, v0, 0.0, t1, dt);
}

}  // namespace

int main() {
    run_criterion(1, "driven force round trip",
                  [] { return catalog_roundtrip(EntryKind::Force, 5); });

    run_criterion(2, "nonlinearity round trip",
                  [] { return catalog_roundtrip(EntryKind::Nonlinearity, 7); });

    run_criterion(3, "random gauge nullity", []() -> Outcome {
        SpecGen make(42);
        testsupport::ExprGen pts(4242);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const GaugeFamilyResult fam = build_family(make());
            const Lagrangian ln = null_from_gauge(fam.phi);
            const Expr residual = euler_lagrange(ln);
            for (int s = 0; s < 100; ++s) {
                Binding b{{"x", pts.uniform(-3.0, 3.0)},
                          {"t", pts.uniform(-3.0, 3.0)},
                          {"xdot", pts.uniform(-3.0, 3.0)},
                          {"xddot", pts.uniform(-3.0, 3.0)}};
                const double r = std::abs(eval(residual, b));
                const double allowed = 1e-9 * (1.0 + std::abs(eval(ln.body(), b)));
                if (r > allowed)
                    return {false, fam.phi.body().str() + ": residual " + sci(r) +
                                       " > " + sci(allowed)};
                worst = std::max(worst, r / allowed);
            }
        }
        return {true, "200 gauges x 100 points, worst residual at " + sci(worst) +
                          " of the bound"};
    });

    run_criterion(4, "family closed forms", []() -> Outcome {
        SpecGen make(42);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const GaugeFamilyResult fam = build_family(make());
            const Lagrangian generic = null_from_gauge(fam.phi);
            ComparisonResult r = compare_numeric(
                fam.null_lagrangian.body(), generic.body(),
                default_domains({fam.null_lagrangian.body(), generic.body()}), 100, 1e-10,
                kDefaultSeed);
            if (!r.equal)
                return {false, "lagrangian form " + fam.phi.body().str() + ", |diff| " +
                                   sci(r.max_diff)};
            worst = std::max(worst, r.max_diff);

            const Expr mixed = diff(diff(fam.phi.body(), "t"), "x");
            r = compare_numeric(fam.force, mixed, default_domains({fam.force, mixed}),
                                100, 1e-10, kDefaultSeed);
            if (!r.equal)
                return {false, "force form " + fam.phi.body().str() + ", |diff| " +
                                   sci(r.max_diff)};
            worst = std::max(worst, r.max_diff);
        }
        return {true, "200 specs, worst |diff| " + sci(worst)};
    });

    run_criterion(5, "action boundary identity", []() -> Outcome {
        const Trajectory traj = integrate_entry("duffing", {}, 1.0, 0.0, 10.0, 1e-3);
        double worst = 0.0;
        for (const CatalogEntry& e : list_entries()) {
            const ActionBoundaryReport rep = verify_action_boundary(e.phi, traj, e.defaults);
            if (!rep.passed || rep.delta > 1e-8)
                return {false, e.id + " delta " + sci(rep.delta)};
            worst = std::max(worst, rep.delta);
        }
        return {true, "12 gauges along one path, worst delta " + sci(worst)};
    });

    run_criterion(6, "equation of motion invariance", []() -> Outcome {
        SpecGen make(42);
        const Lagrangian ls = default_standard_lagrangian();
        const Expr base = equation_of_motion(ls).rhs;
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const GaugeFamilyResult fam = build_family(make());
            const Expr rhs = equation_of_motion(total_with_null(ls, fam.phi)).rhs;
            const ComparisonResult r = compare_numeric(
                rhs, base, default_domains({rhs, base}), 100, 1e-12, kDefaultSeed);
            if (!r.equal)
                return {false, fam.phi.body().str() + " shifts the motion by " +
                                   sci(r.max_diff)};
            worst = std::max(worst, r.max_diff);
        }
        return {true, "200 null additions, worst |diff| " + sci(worst)};
    });

    run_criterion(7, "resonant growth closed form", []() -> Outcome {
        const Lagrangian total = drive_with_gauge(default_standard_lagrangian(),
                                                  GaugeFunction(parse("x*F0*sin(t)")));
        const ExplicitODE ode = equation_of_motion(total, {{"F0", 1.0}});
        const double coarse =
            integrate_rk4(ode, 0.0, 0.0, 0.0, 10.0, 1e-3).samples.back().x;
        const double fine =
            integrate_rk4(ode, 0.0, 0.0, 0.0, 10.0, 5e-4).samples.back().x;
        const double e1 = std::fabs(coarse - kResonanceX10);
        const double e2 = std::fabs(fine - kResonanceX10);
        if (e1 > 1e-6 || e2 > 1e-6)
            return {false, "x(10) errors " + sci(e1) + " and " + sci(e2)};
        return {true, "x(10) err " + sci(e1) + ", half-step err " + sci(e2)};
    });

    run_criterion(8, "duffing period shift", []() -> Outcome {
        const Trajectory traj =
            integrate_entry("duffing", {{"eps", 0.01}}, 1.0, 0.0, 20.0, 1e-4);
        const double err = std::fabs(estimate_period(traj) - kDuffingPeriod);
        if (err > 1e-3) return {false, "period err " + sci(err)};
        return {true, "period err " + sci(err)};
    });

    run_criterion(9, "energy drift and balance", []() -> Outcome {
        const Lagrangian ls = default_standard_lagrangian();
        const Trajectory osc = integrate_rk4(equation_of_motion(ls), 1.0, 0.0, 0.0, 100.0, 1e-3);
        const double d1 = energy_drift(ls, osc);

        const CatalogEntry& duf = lookup("duffing");
        const Lagrangian dl = drive_with_gauge(ls, duf.phi);
        const Trajectory dtraj = integrate_rk4(equation_of_motion(dl, duf.defaults), 1.0,
                                               0.0, 0.0, 100.0, 1e-3);
        const double d2 = energy_drift(dl, dtraj, duf.defaults);
        if (d1 > 1e-6 || d2 > 1e-6)
            return {false, "drift " + sci(d1) + " / " + sci(d2)};

        const CatalogEntry& drv = lookup("driven-cos");
        const Lagrangian lt = drive_with_gauge(ls, drv.phi);
        const Trajectory ftraj = integrate_rk4(equation_of_motion(lt, drv.defaults), 0.0,
                                               0.0, 0.0, 10.0, 1e-4);
        const EnergyBalanceReport fb = energy_balance_check(lt, ftraj, drv.defaults);

        const Trajectory qtraj = integrate_rk4(equation_of_motion(dl, duf.defaults), 1.0,
                                               0.0, 0.0, 10.0, 1e-4);
        const EnergyBalanceReport qb = energy_balance_check(dl, qtraj, duf.defaults);
        if (!fb.passed || fb.tolerance != 1e-6 || !qb.passed || qb.tolerance != 1e-6)
            return {false, "balance mismatch " + sci(fb.max_mismatch) + " / " +
                               sci(qb.max_mismatch)};
        return {true, "drift " + sci(std::max(d1, d2)) + ", balance mismatch " +
                          sci(std::max(fb.max_mismatch, qb.max_mismatch))};
    });

    run_criterion(10, "rk4 convergence order", []() -> Outcome {
        const ExplicitODE ode = equation_of_motion(default_standard_lagrangian());
        auto max_err = [&](double dt) {
            double worst = 0.0;
            for (const auto& s : integrate_rk4(ode, 1.0, 0.0, 0.0, 10.0, dt).samples)
                worst = std::max(worst, std::fabs(s.x - std::cos(s.t)));
            return worst;
        };
        const double ratio = max_err(1e-2) / max_err(5e-3);
        if (ratio < 12.0) return {false, "halving gain " + sci(ratio) + "x"};
        return {true, "halving gain " + std::to_string(ratio).substr(0, 4) + "x"};
    });

    run_criterion(11, "cli determinism", []() -> Outcome {
        std::ostringstream out, err;
        if (cli::run({"catalog", "--verify"}, out, err) != 0)
            return {false, "catalog --verify failed: " + err.str()};

        std::ostringstream rt, rterr;
        if (cli::run({"roundtrip"}, rt, rterr) != 0)
            return {false, "roundtrip failed: " + rterr.str()};
        std::ifstream golden(std::string(GF_TEST_DATA) + "/roundtrip.txt",
                             std::ios::binary);
        std::ostringstream want;
        want << golden.rdbuf();
        if (!golden.good() || rt.str() != want.str())
            return {false, "roundtrip output diverges from the frozen listing"};
        return {true, "verify clean, roundtrip byte-identical"};
    });

    if (g_failures == 0) {
        std::printf("all 11 criteria passed\n");
        return 0;
    }
    std::printf("%d of 11 criteria FAILED\n", g_failures);
    return 1;
}
