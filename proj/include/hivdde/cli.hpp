#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hivdde/dataset.hpp"
#include "hivdde/equilibria.hpp"
#include "hivdde/estimation.hpp"
#include "hivdde/integrator.hpp"
#include "hivdde/io.hpp"
#include "hivdde/model.hpp"
#include "hivdde/params.hpp"
#include "hivdde/stability.hpp"

namespace hivdde::cli {

// Exit codes: distinguish who failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitSolver = 4;
inline constexpr int kExitOptimizer = 5;

class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

struct TimeSpan {
    double t0 = 0.0, t1 = 15.0, dt = 0.25;
};

struct GridSpec {
    double lo, hi;
    std::size_t n;
    bool log = false;
};

struct RunConfig {
    std::optional<std::string> params_path;
    std::optional<std::string> data;  ///< dataset path, or "builtin"
    std::optional<double> delay;
    TimeSpan tspan;
    std::optional<std::filesystem::path> out_dir;
    TableFormat format = TableFormat::Csv;
    std::optional<GridSpec> tau_grid;
    std::optional<GridSpec> beta0_scan;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::size_t jobs = std::max<std::size_t>(1, std::thread::hardware_concurrency());
};

/// Parses "t0:t1:dt".
inline TimeSpan parse_tspan(const std::string& s) {
    TimeSpan ts;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &ts.t0, &ts.t1, &ts.dt) != 3 || !(ts.t1 > ts.t0) ||
        !(ts.dt > 0.0))
        throw CliError(kExitConfig, "bad --tspan '" + s + "': expected t0:t1:dt with t1 > t0, dt > 0");
    return ts;
}

/// Parses "lo:hi:n" with an optional ",log" or ",lin" suffix.
inline GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    std::string spec = s;
    if (auto comma = spec.find(','); comma != std::string::npos) {
        const std::string scale = spec.substr(comma + 1);
        if (scale == "log")
            g.log = true;
        else if (scale != "lin")
            throw CliError(kExitConfig, "bad grid scale '" + scale + "': expected log or lin");
        spec.erase(comma);
    }
    unsigned long n = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lu", &g.lo, &g.hi, &n) != 3 || n < 2 || !(g.hi > g.lo))
        throw CliError(kExitConfig, "bad grid '" + s + "': expected lo:hi:n[,log|lin]");
    if (g.log && !(g.lo > 0.0))
        throw CliError(kExitConfig, "log grid requires positive endpoints");
    g.n = n;
    return g;
}

inline std::vector<double> materialize_grid(const GridSpec& g) {
    std::vector<double> xs(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double w = static_cast<double>(i) / static_cast<double>(g.n - 1);
        xs[i] = g.log ? g.lo * std::pow(g.hi / g.lo, w) : g.lo + w * (g.hi - g.lo);
    }
    return xs;
}

namespace detail {

inline bool is_fitted_row_delay(double u) {
    return u == 0.0 || u == 3.0 || u == 6.0 || u == 9.0 || u == 12.0;
}

inline std::filesystem::path resolve_out_dir(const RunConfig& cfg) {
    std::filesystem::path dir;
    if (cfg.out_dir) {
        dir = *cfg.out_dir;
    } else if (const char* env = std::getenv("HIVDDE_OUT"); env && *env) {
        dir = env;
    } else {
        dir = ".";
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw CliError(kExitConfig, "cannot create output directory " + dir.string());
    return dir;
}

}  // namespace detail

/// Built-in defaults (the u=6 fitted row), overridden by the parameter file,
/// overridden by command-line flags. --delay selects the matching fitted row
/// when it equals one of the studied delays, and always sets u.
inline ModelParams resolve_params(const RunConfig& cfg) {
    try {
        const double row = (cfg.delay && detail::is_fitted_row_delay(*cfg.delay)) ? *cfg.delay : 6.0;
        ModelParams p = uganda_fitted_params(row);
        if (cfg.params_path) p = load_params(*cfg.params_path, p);
        if (cfg.delay) p.u = *cfg.delay;
        validate(p);
        return p;
    } catch (const CliError&) {
        throw;
    } catch (const std::exception& e) {
        throw CliError(kExitConfig, std::string("parameter setup failed: ") + e.what());
    }
}

inline SolverConfig resolve_solver(const RunConfig& cfg, double default_rel = 1e-6) {
    SolverConfig sc;
    sc.rel_tol = cfg.rel_tol.value_or(default_rel);
    sc.abs_tol = cfg.abs_tol.value_or(1e-9);
    return sc;
}

inline Dataset resolve_dataset(const RunConfig& cfg) {
    if (!cfg.data) throw CliError(kExitConfig, "this command needs --data <file|builtin>");
    try {
        if (*cfg.data == "builtin") return builtin_uganda();
        return load_dataset(std::filesystem::path(*cfg.data));
    } catch (const std::exception& e) {
        throw CliError(kExitData, std::string("dataset error: ") + e.what());
    }
}

inline FullState default_initial_state() { return {5.014983, 0.0, 0.0, 0.20, 0.884997, 0.0}; }

/// Runs `fn(i)` for i in [0, n) on `jobs` threads; results land by index.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += jobs) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline int cmd_simulate(const RunConfig& cfg) {
    const ModelParams p = resolve_params(cfg);
    const auto out = detail::resolve_out_dir(cfg);
    const SolverConfig sc = resolve_solver(cfg);
    const TimeSpan ts = cfg.tspan;

    Trajectory<6> traj;
    try {
        traj = integrate<6>(
            [&p](double, const FullState& y, double Idel) { return rhs_full(p, y, Idel); },
            constant_history(default_initial_state()), ts.t0, ts.t1, p.u, kI, sc);
    } catch (const std::exception& e) {
        throw CliError(kExitSolver, std::string("simulation failed: ") + e.what());
    }

    std::vector<std::vector<double>> rows;
    for (double t = ts.t0; t <= ts.t1 + 1e-12; t += ts.dt) {
        const double tc = std::min(t, ts.t1);
        const FullState y = traj.sample(tc);
        rows.push_back({tc, y[kS0], y[kS1], y[kS2], y[kZ], y[kI], y[kR]});
    }
    write_table(out / (std::string("trajectory") + table_extension(cfg.format)),
                {"t", "S0", "S1", "S2", "Z", "I", "R"}, rows, cfg.format);

    if (cfg.data) {
        const Dataset ds = resolve_dataset(cfg);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::map<int, std::array<double, 3>> obs;
        for (const auto& o : ds.susceptible) obs.try_emplace(o.year, std::array{nan, nan, nan})[0] = o.value;
        for (const auto& o : ds.infected) obs.try_emplace(o.year, std::array{nan, nan, nan})[1] = o.value;
        for (const auto& o : ds.info) obs.try_emplace(o.year, std::array{nan, nan, nan})[2] = o.value;
        std::vector<std::vector<double>> orows;
        for (const auto& [year, vals] : obs) {
            const double t = static_cast<double>(year - ds.epoch_year);
            if (t < ts.t0 || t > ts.t1) continue;
            const FullState y = traj.sample(t);
            orows.push_back({static_cast<double>(year), vals[0], y[kS0] + y[kS1] + y[kS2], vals[1],
                             y[kI], vals[2], y[kZ]});
        }
        write_table(out / (std::string("overlay") + table_extension(cfg.format)),
                    {"year", "observed_susceptible", "model_susceptible", "observed_infected",
                     "model_infected", "observed_info", "model_info"},
                    orows, cfg.format);
    }
    return kExitOk;
}

inline int cmd_fit(const RunConfig& cfg) {
    const Dataset ds = resolve_dataset(cfg);
    const double delay = cfg.delay.value_or(6.0);
    const auto out = detail::resolve_out_dir(cfg);

    FitResult result;
    try {
        result = fit(ds, delay, uganda_initial_guess());
    } catch (const std::exception& e) {
        throw CliError(kExitSolver, std::string("fit failed: ") + e.what());
    }

    write_table(out / (std::string("fit") + table_extension(cfg.format)),
                {"delay", "beta0", "eta", "gamma0", "q", "tau", "sse", "iterations", "converged"},
                {{delay, result.x.beta0, result.x.eta, result.x.gamma0, result.x.q,
                  result.x.q / result.x.eta, result.sse, static_cast<double>(result.iterations),
                  result.converged ? 1.0 : 0.0}},
                cfg.format);

    std::vector<std::vector<double>> trace;
    for (std::size_t i = 0; i < result.trace.size(); ++i)
        trace.push_back({static_cast<double>(i + 1), result.trace[i]});
    write_table(out / (std::string("fit_trace") + table_extension(cfg.format)),
                {"iteration", "best_sse"}, trace, cfg.format);

    return result.converged ? kExitOk : kExitOptimizer;
}

namespace detail {

inline const char* root_case_name(RootCase c) {
    switch (c) {
        case RootCase::NoRoot: return "NoRoot";
        case RootCase::TwoRoots: return "TwoRoots";
        case RootCase::BoundaryUnique: return "BoundaryUnique";
        case RootCase::UniqueSupercritical: return "UniqueSupercritical";
    }
    return "?";
}

inline const char* asymptotic_case_name(const DerivedQuantities& dq) {
    const double scale = std::max(dq.D0, dq.rel_weight);
    if (std::abs(dq.D0 - dq.rel_weight) <= 1e-12 * scale) return "boundary";
    return dq.D0 > dq.rel_weight ? "vanishing-infection" : "saturating-infection";
}

/// Key/value report writer; values may be numbers or labels.
class Report {
public:
    Report(const std::filesystem::path& path, TableFormat format)
        : out_(path), format_(format) {
        if (!out_) throw std::runtime_error("cannot write report: " + path.string());
    }
    void add(const std::string& name, double value) {
        if (format_ == TableFormat::Csv)
            out_ << name << ',' << format_num(value) << '\n';
        else
            out_ << nlohmann::ordered_json{{"name", name}, {"value", value}}.dump() << '\n';
    }
    void add(const std::string& name, const std::string& value) {
        if (format_ == TableFormat::Csv)
            out_ << name << ',' << value << '\n';
        else
            out_ << nlohmann::ordered_json{{"name", name}, {"value", value}}.dump() << '\n';
    }

private:
    std::ofstream out_;
    TableFormat format_;
};

}  // namespace detail

inline int cmd_analyze(const RunConfig& cfg) {
    const ModelParams p = resolve_params(cfg);
    const auto out = detail::resolve_out_dir(cfg);
    const DerivedQuantities dq = derived(p);

    try {
        detail::Report rep(out / (std::string("analysis") + table_extension(cfg.format)), cfg.format);
        rep.add("D0", dq.D0);
        rep.add("R0", dq.R0);
        rep.add("tau", dq.tau);
        rep.add("gamma_total", dq.gamma_total);
        rep.add("b0u", dq.b0u);
        rep.add("rel_weight", dq.rel_weight);
        rep.add("asymptotic_case", detail::asymptotic_case_name(dq));

        const Equilibrium e0 = disease_free(p);
        rep.add("E0_S0", e0.S0);

        const DfeStability dfe = dfe_stability(p);
        switch (dfe.verdict) {
            case DfeStability::Verdict::Stable:
                rep.add("dfe", p.beta0 == std::max({p.beta0, p.beta1, p.beta2})
                                   ? "stable (globally attracting)"
                                   : "stable");
                break;
            case DfeStability::Verdict::Marginal:
                rep.add("dfe", "marginal");
                break;
            case DfeStability::Verdict::Unstable:
                rep.add("dfe", "unstable");
                rep.add("dfe_positive_root", *dfe.positive_root);
                break;
        }

        const RootReport roots = classify_roots(p);
        rep.add("root_case", detail::root_case_name(roots.kind));
        for (std::size_t i = 0; i < roots.roots.size(); ++i) {
            rep.add("root_" + std::to_string(i), roots.roots[i]);
            rep.add("root_" + std::to_string(i) + "_slope", roots.slopes[i]);
        }

        if (const auto endemic = solve_endemic(p)) {
            rep.add("Estar_S0", endemic->S0);
            rep.add("Estar_S1", endemic->S1);
            rep.add("Estar_S2", endemic->S2);
            rep.add("Estar_Z", endemic->Z);
            rep.add("Estar_I", endemic->I);

            const PersistenceBounds pb = persistence_bounds(p);
            rep.add("persistence_weak_lower", pb.weak_lower);
            rep.add("persistence_upper", pb.upper);

            ModelParams p0 = p;
            p0.u = 0.0;
            const SpectrumReport spec = endemic_stable_u0(p0);
            rep.add("endemic_u0_max_real_part", spec.max_real_part);
            rep.add("endemic_u0_stable", spec.stable ? "true" : "false");

            std::ofstream sout(out / "spectrum.csv");
            for (const auto& ev : spec.eigenvalues)
                sout << format_num(ev.real()) << ',' << format_num(ev.imag()) << '\n';
            sout << format_num(spec.max_real_part) << ',' << (spec.stable ? "true" : "false") << '\n';
        }
    } catch (const CliError&) {
        throw;
    } catch (const std::exception& e) {
        throw CliError(kExitSolver, std::string("analysis failed: ") + e.what());
    }
    return kExitOk;
}

inline int cmd_sweep(const RunConfig& cfg) {
    const ModelParams p = resolve_params(cfg);
    const auto out = detail::resolve_out_dir(cfg);
    const DerivedQuantities dq = derived(p);

    try {
        if (cfg.tau_grid) {
            const auto taus = materialize_grid(*cfg.tau_grid);
            std::vector<SweepRow> rows(taus.size());
            parallel_for(taus.size(), cfg.jobs, [&](std::size_t i) {
                rows[i] = sweep_tau(p, std::span(&taus[i], 1)).front();
            });
            std::vector<std::vector<double>> table;
            for (const auto& r : rows)
                table.push_back({r.tau, r.I, r.S0, r.S1, r.S2, r.Z, r.lower_bound, r.upper_bound});
            write_table(out / (std::string("tau_sweep") + table_extension(cfg.format)),
                        {"tau", "I_star", "S0_star", "S1_star", "S2_star", "Z_star", "lower_bound",
                         "upper_bound"},
                        table, cfg.format);
        }

        if (cfg.beta0_scan) {
            const auto betas = materialize_grid(*cfg.beta0_scan);
            std::vector<double> max_re(betas.size());
            parallel_for(betas.size(), cfg.jobs, [&](std::size_t i) {
                ModelParams ps = p;
                ps.u = 0.0;
                ps.beta0 = betas[i];
                max_re[i] = endemic_stable_u0(ps).max_real_part;
            });
            std::vector<std::vector<double>> table;
            std::optional<double> first_unstable;
            for (std::size_t i = 0; i < betas.size(); ++i) {
                table.push_back({betas[i], max_re[i], max_re[i] < 0.0 ? 1.0 : 0.0});
                if (!first_unstable && max_re[i] >= 0.0) first_unstable = betas[i];
            }
            const auto path = out / (std::string("beta0_scan") + table_extension(cfg.format));
            write_table(path, {"beta0", "max_real_part", "stable"}, table, cfg.format);
            std::ofstream note(out / "beta0_scan_summary.txt");
            if (first_unstable)
                note << "first_unstable_beta0," << format_num(*first_unstable) << '\n';
            else
                note << "stable_up_to_cap," << format_num(cfg.beta0_scan->hi) << '\n';
        }

        // G-curve samples for regenerating the root-equation picture.
        {
            const double target = p.mu + p.d;
            const double I_hi = p.beta0 > dq.D0
                                    ? p.B * (p.beta0 - dq.D0) / (p.mu * p.beta0) + 1.0
                                    : p.B / p.mu;
            std::vector<std::vector<double>> table;
            const std::size_t n = 1000;
            for (std::size_t i = 0; i < n; ++i) {
                const double I = 1.05 * I_hi * static_cast<double>(i) / static_cast<double>(n - 1);
                table.push_back({I, eval_G(I, p), target});
            }
            write_table(out / (std::string("gcurve") + table_extension(cfg.format)),
                        {"I", "G", "mu_plus_d"}, table, cfg.format);
        }
    } catch (const CliError&) {
        throw;
    } catch (const std::exception& e) {
        throw CliError(kExitSolver, std::string("sweep failed: ") + e.what());
    }
    return kExitOk;
}

inline int cmd_si(const RunConfig& cfg) {
    const ModelParams p = resolve_params(cfg);
    const auto out = detail::resolve_out_dir(cfg);
    const SolverConfig sc = resolve_solver(cfg);
    const TimeSpan ts = cfg.tspan;

    Trajectory<2> traj;
    try {
        traj = integrate<2>(
            [&p](double, const SiState& y, double Idel) { return rhs_si(p, y[0], y[1], Idel); },
            constant_history(SiState{5.014983, 0.884997}), ts.t0, ts.t1, p.u, 1, sc);
    } catch (const std::exception& e) {
        throw CliError(kExitSolver, std::string("SI simulation failed: ") + e.what());
    }

    std::vector<std::vector<double>> rows;
    for (double t = ts.t0; t <= ts.t1 + 1e-12; t += ts.dt) {
        const double tc = std::min(t, ts.t1);
        const SiState y = traj.sample(tc);
        rows.push_back({tc, y[0], y[1]});
    }
    write_table(out / (std::string("si") + table_extension(cfg.format)), {"t", "S0", "I"}, rows,
                cfg.format);
    return kExitOk;
}

}  // namespace hivdde::cli
