// pairlim: command-line front end for simulations, limit curves and claim checks.

#include "pairlim/claims.hpp"
#include "pairlim/error.hpp"
#include "pairlim/io.hpp"
#include "pairlim/limits.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>

namespace fs = std::filesystem;
using namespace pairlim;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitFailed = 4;

struct Options {
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replications;
    std::string claim;
    std::string which = "H";
    bool quiet = false;
};

/// Errors raised while reading or checking the config map to exit code 2.
struct ConfigFailure {
    std::string code;
    std::string message;
};

bool is_config_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::EmptyModel:
        case ErrorCode::NonPositiveRate:
        case ErrorCode::ProportionsDoNotSumToOne:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NTooSmall:
        case ErrorCode::InvalidRegime:
        case ErrorCode::InvalidState:
        case ErrorCode::InvalidConfig:
        case ErrorCode::InvalidInit:
        case ErrorCode::InitMassMismatch:
        case ErrorCode::UnsupportedRegime:
        case ErrorCode::ConfigError: return true;
        default: return false;
    }
}

ExperimentConfig effective_config(const Options& o) {
    if (o.config_path.empty()) throw ConfigFailure{"ConfigError", "--config is required"};
    ExperimentConfig cfg;
    try {
        cfg = load_config(o.config_path);
        if (o.seed) cfg.seed = *o.seed;
        if (o.replications) cfg.replications = *o.replications;
        if (!o.out.empty()) cfg.output_dir = o.out;
        validate(cfg);
    } catch (const Error& e) {
        throw ConfigFailure{std::string(to_string(e.code())), e.what()};
    }
    return cfg;
}

void say(const Options& o, const std::string& line) {
    if (!o.quiet) std::cout << line << "\n";
}

std::string header_for(const ExperimentConfig& cfg) { return header_line(config_hash(cfg), cfg.seed); }

int cmd_simulate(const Options& o) {
    const auto cfg = effective_config(o);
    const fs::path out = cfg.output_dir;
    const auto model = finite_model(cfg, cfg.N());
    const auto init = initial_state(cfg, model);
    const auto runs = replicate(model, init, sim_config(cfg), StopRule::none(), cfg.replications);
    const auto header = header_for(cfg);
    std::vector<ManifestEntry> files;
    std::uint64_t events = 0;
    bool truncated = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto name = fmt::format("trajectory_{:04d}.csv", i);
        write_text(out / name, trajectory_csv(runs[i], header));
        files.push_back({name, "trajectory"});
        events += runs[i].event_count;
        truncated = truncated || runs[i].truncated();
    }
    write_text(out / "manifest.json", manifest_json("simulate", cfg, files));
    say(o, fmt::format("simulated {} replicate(s) at N={} ({} events) -> {}", runs.size(), cfg.N(), events,
                       out.string()));
    if (truncated) {
        std::cerr << error_json("MaxEventsExceeded", "at least one replicate hit the event cap", header);
        return kExitRuntime;
    }
    return kExitPass;
}

std::vector<std::string> numbered(const std::string& stem, std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < n; ++j) names.push_back(fmt::format("{}_{}", stem, j + 1));
    return names;
}

std::string equilibria_json(const ExperimentConfig& cfg, const std::string& header) {
    const auto& p = cfg.model;
    std::string out = "{\n";
    out += fmt::format("  \"header\": \"{}\",\n", header);
    const auto hinf = h_infinity(p);
    out += fmt::format("  \"H_inf\": {},\n  \"H_inf_degenerate\": {},\n", format_real(hinf.value),
                       hinf.degenerate ? "true" : "false");
    auto vec = [](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t j = 0; j < v.size(); ++j) s += (j ? ", " : "") + format_real(v[j]);
        return s + "]";
    };
    if (!hinf.degenerate) out += fmt::format("  \"collapse_profile_at_H_inf\": {},\n", vec(collapse_point(p, hinf.value)));
    if (cfg.regime.kind == RegimeKind::FixedOverloaded) {
        out += fmt::format("  \"overloaded_equilibrium\": {},\n", vec(overloaded_equilibrium(p, cfg.regime.r)));
    }
    out += fmt::format("  \"critical_equilibrium\": {}", vec(critical_equilibrium(p)));
    if (cfg.regime.kind == RegimeKind::Dynamic) {
        const auto fp = crn_fixed_point(finite_model(cfg, cfg.N()));
        out += fmt::format(",\n  \"crn_fixed_point\": {{\"u\": {}, \"v\": {}, \"w\": {}}}", vec(fp.u), vec(fp.v),
                           format_real(fp.w));
    }
    return out + "\n}\n";
}

int cmd_limit(const Options& o, const std::string& which) {
    const auto cfg = effective_config(o);
    const fs::path out = cfg.output_dir;
    const auto header = header_for(cfg);
    const auto& p = cfg.model;
    const std::size_t J = p.types();
    const auto grid = uniform_grid(cfg.horizon, cfg.grid_points);
    const auto f0 = initial_scaled(cfg);
    const double mass0 = std::accumulate(f0.begin(), f0.end(), 0.0);
    std::string file;
    std::string text;
    if (which == "H") {
        file = "H.csv";
        text = curve_csv(solve_H(p, mass0, grid), {"H"}, header);
    } else if (which == "profile") {
        const auto H = solve_H(p, mass0, grid);
        const auto prof = limit_profile(p, H);
        LimitCurve both{grid, {}};
        for (std::size_t k = 0; k < grid.size(); ++k) {
            std::vector<double> row{H.at(k)};
            row.insert(row.end(), prof.values[k].begin(), prof.values[k].end());
            both.values.push_back(row);
        }
        auto names = numbered("f", J);
        names.insert(names.begin(), "H");
        file = "profile.csv";
        text = curve_csv(both, names, header);
    } else if (which == "overloaded") {
        if (cfg.regime.kind != RegimeKind::FixedOverloaded) {
            throw ConfigFailure{"ConfigError", "--which overloaded needs an overloaded regime"};
        }
        file = "overloaded.csv";
        text = curve_csv(overloaded_ode(p, cfg.regime.r, f0, grid), numbered("f", J), header);
    } else if (which == "critical") {
        file = "critical.csv";
        text = curve_csv(critical_ode(p, f0, grid), numbered("f", J), header);
    } else if (which == "clt") {
        const auto fbar = critical_ode(p, f0, grid);
        const auto path = clt_diffusion(p, fbar, std::vector<double>(J, 0.0), cfg.seed);
        file = "clt.csv";
        text = curve_csv(LimitCurve{path.grid, path.values}, numbered("fhat", J), header);
    } else if (which == "equilibria") {
        file = "equilibria.json";
        text = equilibria_json(cfg, header);
    } else {
        throw ConfigFailure{"ConfigError", "unknown --which '" + which + "'"};
    }
    write_text(out / file, text);
    write_text(out / "manifest.json", manifest_json("limit " + which, cfg, {{file, which}}));
    say(o, fmt::format("wrote {}", (out / file).string()));
    return kExitPass;
}

void print_report(const Options& o, const std::string& label, const VerdictReport& r, double seconds) {
    say(o, fmt::format("{} {}: {} = {:.6g} (threshold {:.6g}) [{:.1f}s]", r.pass ? "PASS" : "FAIL", label,
                       r.statistic, r.observed, r.threshold, seconds));
}

int cmd_verify(const Options& o) {
    if (o.claim.empty()) throw ConfigFailure{"ConfigError", "--claim is required"};
    if (o.claim == "all") {
        const fs::path out = o.out.empty() ? fs::path("out") : fs::path(o.out);
        bool all_pass = true;
        std::size_t index = 0;
        for (auto sc : desk_suite()) {
            ++index;
            if (o.seed) sc.config.seed = *o.seed;
            sc.config.output_dir = out.string();
            const auto start = std::chrono::steady_clock::now();
            const auto rep = run_claim(sc.claim, sc.config);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_text(out / fmt::format("{:02d}_{}.json", index, sc.claim),
                       report_json(rep, header_for(sc.config)));
            print_report(o, sc.label, rep, secs);
            all_pass = all_pass && rep.pass;
        }
        return all_pass ? kExitPass : kExitFailed;
    }
    if (!is_claim(o.claim)) throw ConfigFailure{"ConfigError", "unknown claim '" + o.claim + "'"};
    const auto cfg = effective_config(o);
    const fs::path out = cfg.output_dir;
    const auto start = std::chrono::steady_clock::now();
    VerdictReport rep;
    try {
        rep = run_claim(o.claim, cfg);
    } catch (const Error& e) {
        if (is_config_code(e.code())) throw ConfigFailure{std::string(to_string(e.code())), e.what()};
        throw;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(out / "report.json", report_json(rep, header_for(cfg)));
    write_text(out / "manifest.json", manifest_json("verify " + o.claim, cfg, {{"report.json", "report"}}));
    print_report(o, o.claim, rep, secs);
    return rep.pass ? kExitPass : kExitFailed;
}

int cmd_sweep(const Options& o) {
    if (o.claim.empty()) throw ConfigFailure{"ConfigError", "--claim is required"};
    if (!is_sweepable(o.claim)) throw ConfigFailure{"ConfigError", "claim '" + o.claim + "' cannot be swept"};
    const auto cfg = effective_config(o);
    const fs::path out = cfg.output_dir;
    const auto header = header_for(cfg);
    const auto rep = run_sweep(o.claim, cfg);
    write_text(out / "sweep.csv", table_csv(rep, header));
    write_text(out / "report.json", report_json(rep, header));
    write_text(out / "manifest.json",
               manifest_json("sweep " + o.claim, cfg, {{"sweep.csv", "table"}, {"report.json", "report"}}));
    for (const auto& row : rep.rows) say(o, fmt::format("N={} statistic={:.6g}", row[0], row[1]));
    print_report(o, "sweep " + o.claim, rep, 0.0);
    return rep.pass ? kExitPass : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and limit-verification tool for the pairing chain"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "experiment config (JSON)");
        sub->add_option("--out", o.out, "output directory (overrides output_dir)");
        sub->add_option("--seed", o.seed, "seed (overrides the config)");
        sub->add_option("--replications", o.replications, "replication count (overrides the config)");
        sub->add_flag("--quiet", o.quiet, "no summary on stdout");
    };
    auto* simulate = app.add_subcommand("simulate", "sample trajectories");
    auto* limit = app.add_subcommand("limit", "solve a limit curve");
    auto* verify = app.add_subcommand("verify", "run one claim's check");
    auto* sweep = app.add_subcommand("sweep", "convergence table over N_list");
    auto* equilibria = app.add_subcommand("equilibria", "fixed points of the limits");
    for (auto* sub : {simulate, limit, verify, sweep, equilibria}) add_common(sub);
    limit->add_option("--which", o.which, "H | profile | overloaded | critical | clt | equilibria");
    verify->add_option("--claim", o.claim, "claim name, or all");
    sweep->add_option("--claim", o.claim, "mass-lln | critical-lln | overloaded-lln | collapse | occupation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (*simulate) return cmd_simulate(o);
        if (*limit) return cmd_limit(o, o.which);
        if (*verify) return cmd_verify(o);
        if (*sweep) return cmd_sweep(o);
        if (*equilibria) return cmd_limit(o, "equilibria");
    } catch (const ConfigFailure& f) {
        std::cerr << error_json(f.code, f.message, "");
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << error_json(std::string(to_string(e.code())), e.what(), "");
        return is_config_code(e.code()) ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << error_json("RuntimeError", e.what(), "");
        return kExitRuntime;
    }
    return kExitRuntime;
}
