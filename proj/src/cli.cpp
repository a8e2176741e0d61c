#include "gaugeforge/cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gaugeforge/catalog.hpp"
#include "gaugeforge/dynamics.hpp"
#include "gaugeforge/parse.hpp"
#include "gaugeforge/simplify.hpp"

namespace gaugeforge::cli {

namespace {

// Anything wrong with the invocation itself; mapped to exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Expr parse_expr(const std::string& text) {
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw UsageError(std::string(e.what()) + " in '" + text + "'");
    }
}

GaugeFunction make_gauge(const std::string& text) {
    try {
        return GaugeFunction(parse_expr(text));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()) + " (from gauge '" + text + "')");
    }
}

Lagrangian make_standard(const std::string& text) {
    try {
        return Lagrangian(parse_expr(text), Role::Standard);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()) + " (from lagrangian '" + text + "')");
    }
}

double to_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("expected a number for " + what + ", got '" + s + "'");
    }
    if (used != s.size()) throw UsageError("trailing junk in " + what + ": '" + s + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// key = value lines; # and ; start comments. The key set is closed so a
// typo fails loudly instead of being silently ignored.
std::map<std::string, std::string> read_config(const std::string& path) {
    static const std::set<std::string> known = {"system", "gauge", "lagrangian", "sign",
                                                "x0",     "v0",    "t0",         "t1",
                                                "dt",     "out",   "seed"};
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + " is not key = value: '" +
                             line + "'");
        const std::string key = trim(line.substr(0, eq));
        if (!known.count(key))
            throw UsageError("unknown config key '" + key + "' on line " + std::to_string(lineno));
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

Binding parse_params(const std::vector<std::string>& params) {
    Binding b;
    for (const std::string& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0)
            throw UsageError("bad --param '" + p + "', expected name=value");
        b[trim(p.substr(0, eq))] = to_double(trim(p.substr(eq + 1)), "--param " + p);
    }
    return b;
}

Sign to_sign(int raw) {
    if (raw == 1) return Sign::Plus;
    if (raw == -1) return Sign::Minus;
    throw UsageError("--sign must be 1 or -1, got " + std::to_string(raw));
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string full_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Everything a run-style subcommand can take; which fields matter depends
// on the subcommand.
struct RunConfig {
    std::string config_path;
    std::string system;
    std::string gauge_text;
    std::string ls_text;
    std::string out_path;
    int sign = 1;
    double x0 = 0.0;
    double v0 = 0.0;
    double t0 = 0.0;
    double t1 = 10.0;
    double dt = 1e-3;
    std::uint64_t seed = default_seed();  // flag > config file > environment > 42
    std::vector<std::string> params;
};

// Option handles, so config-file values only fill in flags the user did
// not pass explicitly.
struct RunOptions {
    CLI::Option* system = nullptr;
    CLI::Option* gauge = nullptr;
    CLI::Option* lagrangian = nullptr;
    CLI::Option* sign = nullptr;
    CLI::Option* x0 = nullptr;
    CLI::Option* v0 = nullptr;
    CLI::Option* t0 = nullptr;
    CLI::Option* t1 = nullptr;
    CLI::Option* dt = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* seed = nullptr;
};

void apply_config(RunConfig& cfg, const RunOptions& opts) {
    if (cfg.config_path.empty()) return;
    const auto kv = read_config(cfg.config_path);
    auto fill = [&](const char* key, CLI::Option* opt, auto&& set) {
        const auto it = kv.find(key);
        if (it == kv.end()) return;
        if (opt && opt->count() > 0) return;  // explicit flag wins
        set(it->second);
    };
    fill("system", opts.system, [&](const std::string& v) { cfg.system = v; });
    fill("gauge", opts.gauge, [&](const std::string& v) { cfg.gauge_text = v; });
    fill("lagrangian", opts.lagrangian, [&](const std::string& v) { cfg.ls_text = v; });
    fill("sign", opts.sign, [&](const std::string& v) {
        cfg.sign = static_cast<int>(to_double(v, "config sign"));
    });
    fill("x0", opts.x0, [&](const std::string& v) { cfg.x0 = to_double(v, "config x0"); });
    fill("v0", opts.v0, [&](const std::string& v) { cfg.v0 = to_double(v, "config v0"); });
    fill("t0", opts.t0, [&](const std::string& v) { cfg.t0 = to_double(v, "config t0"); });
    fill("t1", opts.t1, [&](const std::string& v) { cfg.t1 = to_double(v, "config t1"); });
    fill("dt", opts.dt, [&](const std::string& v) { cfg.dt = to_double(v, "config dt"); });
    fill("out", opts.out, [&](const std::string& v) { cfg.out_path = v; });
    fill("seed", opts.seed, [&](const std::string& v) {
        cfg.seed = static_cast<std::uint64_t>(to_double(v, "config seed"));
    });
}

// The gauge, standard Lagrangian, and parameter values that define a run:
// either a catalog entry or inline expressions, never both.
struct SystemParts {
    GaugeFunction phi;
    Lagrangian standard;
    Binding binding;
};

SystemParts resolve_system(const RunConfig& cfg) {
    const bool has_system = !cfg.system.empty();
    const bool has_inline = !cfg.gauge_text.empty() || !cfg.ls_text.empty();
    if (has_system && has_inline)
        throw UsageError("give either --system or inline --gauge/--ls, not both");
    if (!has_system && cfg.gauge_text.empty())
        throw UsageError("one of --system or --gauge is required");

    Binding b;
    if (has_system) {
        const CatalogEntry& e = lookup(cfg.system);
        b = e.defaults;
        for (const auto& [k, v] : parse_params(cfg.params)) b[k] = v;
        return SystemParts{e.phi, default_standard_lagrangian(), std::move(b)};
    }
    b = parse_params(cfg.params);
    Lagrangian ls =
        cfg.ls_text.empty() ? default_standard_lagrangian() : make_standard(cfg.ls_text);
    return SystemParts{make_gauge(cfg.gauge_text), std::move(ls), std::move(b)};
}

Trajectory simulate_trajectory(const SystemParts& sys, const RunConfig& cfg,
                               Lagrangian& total_out) {
    total_out = drive_with_gauge(sys.standard, sys.phi, to_sign(cfg.sign));
    const ExplicitODE ode = equation_of_motion(total_out, sys.binding);
    return integrate_rk4(ode, cfg.x0, cfg.v0, cfg.t0, cfg.t1, cfg.dt);
}

int cmd_derive(const RunConfig& cfg, std::ostream& out) {
    const GaugeFunction phi = make_gauge(cfg.gauge_text);
    const Sign sigma = to_sign(cfg.sign);
    out << "gauge: " << phi.body().str() << '\n';
    out << "null lagrangian: " << null_from_gauge(phi).body().str() << '\n';
    out << "energy term: " << energy_from_gauge(phi).str() << '\n';
    out << "force (sign " << cfg.sign << "): " << force_from_gauge(phi, sigma).str() << '\n';
    return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    Lagrangian L = [&] {
        try {
            return Lagrangian(parse_expr(cfg.ls_text), Role::Total);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string(e.what()) + " (from lagrangian '" + cfg.ls_text + "')");
        }
    }();
    const Expr el = euler_lagrange(L);
    const bool null = is_null(L);
    out << "lagrangian: " << L.body().str() << '\n';
    out << "euler-lagrange: " << el.str() << '\n';
    out << "verdict: " << (null ? "null" : "not null") << '\n';
    return null ? 0 : 1;
}

int cmd_catalog(bool verify, std::uint64_t seed, std::ostream& out) {
    if (!verify) {
        out << export_entries();
        return 0;
    }
    bool all_ok = true;
    for (const CatalogEntry& e : list_entries()) {
        const VerificationReport rep = verify_entry(e, seed);
        if (rep.passed()) {
            out << e.id << ": ok\n";
        } else {
            all_ok = false;
            out << e.id << ": FAIL (" << rep.diagnostic << ")\n";
        }
    }
    return all_ok ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SystemParts sys = resolve_system(cfg);
    Lagrangian total = default_standard_lagrangian();
    const Trajectory traj = simulate_trajectory(sys, cfg, total);
    const Expr energy = energy_function(total);

    // with --out the CSV goes to the file; without it the CSV owns stdout
    // and the summaries move to the diagnostic stream
    std::ostream* summary = &out;
    if (cfg.out_path.empty()) {
        write_csv(out, traj, energy, sys.binding);
        summary = &err;
    } else {
        std::ofstream file(cfg.out_path);
        if (!file) throw UsageError("cannot write '" + cfg.out_path + "'");
        write_csv(file, traj, energy, sys.binding);
        out << "wrote " << cfg.out_path << " (" << traj.samples.size() << " samples)\n";
    }

    *summary << "energy drift: " << short_num(energy_drift(total, traj, sys.binding)) << '\n';
    if (traj.uniform) {
        const EnergyBalanceReport bal = energy_balance_check(total, traj, sys.binding);
        *summary << "energy balance: " << (bal.passed ? "ok" : "FAIL") << " (max mismatch "
                 << short_num(bal.max_mismatch) << ", tol " << short_num(bal.tolerance) << ")\n";
    } else {
        *summary << "energy balance: skipped (window is not a whole number of steps)\n";
    }
    return 0;
}

int cmd_action_check(const RunConfig& cfg, const std::string& check_gauge, std::ostream& out) {
    if (check_gauge.empty()) throw UsageError("action-check requires --gauge");
    const GaugeFunction phi = make_gauge(check_gauge);

    // --system drives the trajectory when given; otherwise the checked
    // gauge itself does
    RunConfig traj_cfg = cfg;
    if (traj_cfg.system.empty() && traj_cfg.gauge_text.empty()) traj_cfg.gauge_text = check_gauge;
    const SystemParts sys = resolve_system(traj_cfg);
    Lagrangian total = default_standard_lagrangian();
    const Trajectory traj = simulate_trajectory(sys, traj_cfg, total);

    const ActionBoundaryReport rep = verify_action_boundary(phi, traj, sys.binding);
    out << "action integral: " << full_num(rep.integral) << '\n';
    out << "boundary values: " << full_num(rep.boundary) << '\n';
    out << "difference: " << short_num(rep.delta) << " (tol " << short_num(rep.tolerance)
        << ")\n";
    out << "verdict: " << (rep.passed ? "ok" : "FAIL") << '\n';
    return rep.passed ? 0 : 1;
}

int cmd_roundtrip(std::ostream& out) {
    bool all_ok = true;
    for (const CatalogEntry& e : list_entries()) {
        const VerificationReport rep = verify_entry(e);
        all_ok = all_ok && rep.passed();
        out << (rep.passed() ? "PASS" : "FAIL") << ' ' << e.id << ": derived "
            << rep.force.str() << ", declared " << e.declared.str() << '\n';
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"gauge functions, null Lagrangians, and the forces they generate"};
    app.require_subcommand(1);

    RunConfig cfg;
    RunOptions opts;
    std::string check_gauge;
    bool catalog_verify = false;

    CLI::App* derive = app.add_subcommand("derive", "derive the null Lagrangian, energy term, "
                                                    "and force of a gauge function");
    opts.gauge = derive->add_option("--gauge", cfg.gauge_text, "gauge function over x and t");
    opts.sign = derive->add_option("--sign", cfg.sign, "driving sign, 1 or -1");
    derive->add_option("--config", cfg.config_path, "key = value config file");

    CLI::App* verify = app.add_subcommand("verify", "check whether a Lagrangian is null");
    opts.lagrangian = verify->add_option("--lagrangian", cfg.ls_text, "expression over xdot, x, t");
    verify->add_option("--config", cfg.config_path, "key = value config file");

    CLI::App* catalog = app.add_subcommand("catalog", "list the built-in systems");
    catalog->add_flag("--verify", catalog_verify, "re-derive and check every entry");
    opts.seed = catalog->add_option("--seed", cfg.seed, "sampling seed for the checks");
    catalog->add_option("--config", cfg.config_path, "key = value config file");

    CLI::App* simulate = app.add_subcommand("simulate", "integrate a driven system and report "
                                                        "energy diagnostics");
    opts.system = simulate->add_option("--system", cfg.system, "catalog entry id");
    CLI::Option* sim_gauge = simulate->add_option("--gauge", cfg.gauge_text, "inline gauge");
    CLI::Option* sim_ls =
        simulate->add_option("--ls", cfg.ls_text, "inline standard Lagrangian (default oscillator)");
    CLI::Option* sim_sign = simulate->add_option("--sign", cfg.sign, "driving sign, 1 or -1");
    opts.x0 = simulate->add_option("--x0", cfg.x0, "initial position");
    opts.v0 = simulate->add_option("--v0", cfg.v0, "initial velocity");
    opts.t0 = simulate->add_option("--t0", cfg.t0, "window start");
    opts.t1 = simulate->add_option("--t1", cfg.t1, "window end");
    opts.dt = simulate->add_option("--dt", cfg.dt, "step size");
    opts.out = simulate->add_option("--out", cfg.out_path, "CSV path (default: stdout)");
    simulate->add_option("--param", cfg.params, "parameter value as name=value (repeatable)");
    simulate->add_option("--config", cfg.config_path, "key = value config file");

    CLI::App* action_check =
        app.add_subcommand("action-check", "integrate a system and check that the gauge's "
                                           "null Lagrangian matches its boundary values");
    action_check->add_option("--gauge", check_gauge, "gauge function to check");
    CLI::Option* ac_system = action_check->add_option("--system", cfg.system, "catalog entry id");
    CLI::Option* ac_ls = action_check->add_option("--ls", cfg.ls_text, "inline standard Lagrangian");
    CLI::Option* ac_sign = action_check->add_option("--sign", cfg.sign, "driving sign, 1 or -1");
    CLI::Option* ac_x0 = action_check->add_option("--x0", cfg.x0, "initial position");
    CLI::Option* ac_v0 = action_check->add_option("--v0", cfg.v0, "initial velocity");
    CLI::Option* ac_t0 = action_check->add_option("--t0", cfg.t0, "window start");
    CLI::Option* ac_t1 = action_check->add_option("--t1", cfg.t1, "window end");
    CLI::Option* ac_dt = action_check->add_option("--dt", cfg.dt, "step size");
    action_check->add_option("--param", cfg.params, "parameter value as name=value (repeatable)");
    action_check->add_option("--config", cfg.config_path, "key = value config file");

    app.add_subcommand("roundtrip", "re-derive every catalog entry and print one PASS line each");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (app.got_subcommand(derive)) {
            apply_config(cfg, opts);
            if (cfg.gauge_text.empty()) throw UsageError("derive requires --gauge");
            return cmd_derive(cfg, out);
        }
        if (app.got_subcommand(verify)) {
            apply_config(cfg, opts);
            if (cfg.ls_text.empty()) throw UsageError("verify requires --lagrangian");
            return cmd_verify(cfg, out);
        }
        if (app.got_subcommand(catalog)) {
            apply_config(cfg, opts);
            return cmd_catalog(catalog_verify, cfg.seed, out);
        }
        if (app.got_subcommand(simulate)) {
            opts.gauge = sim_gauge;
            opts.lagrangian = sim_ls;
            opts.sign = sim_sign;
            apply_config(cfg, opts);
            return cmd_simulate(cfg, out, err);
        }
        if (app.got_subcommand(action_check)) {
            opts.system = ac_system;
            opts.lagrangian = ac_ls;
            opts.sign = ac_sign;
            opts.x0 = ac_x0;
            opts.v0 = ac_v0;
            opts.t0 = ac_t0;
            opts.t1 = ac_t1;
            opts.dt = ac_dt;
            opts.gauge = nullptr;
            apply_config(cfg, opts);
            return cmd_action_check(cfg, check_gauge, out);
        }
        return cmd_roundtrip(out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const CatalogError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const EvalError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const DynamicsError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace gaugeforge::cli
