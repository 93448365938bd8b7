#include "pairlim/claims.hpp"

#include "pairlim/curve.hpp"
#include "pairlim/error.hpp"
#include "pairlim/limits.hpp"
#include "pairlim/parallel.hpp"
#include "pairlim/queues.hpp"
#include "pairlim/stationary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace pairlim {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

struct Setup {
    FiniteModel model;
    State init;
    SimConfig sim;
};

Setup setup(const ExperimentConfig& cfg, Count N, std::initializer_list<RegimeKind> allowed, const std::string& claim) {
    if (std::find(allowed.begin(), allowed.end(), cfg.regime.kind) == allowed.end()) {
        bad("claim " + claim + " does not apply to the " + to_string(cfg.regime.kind) + " regime");
    }
    Setup s{finite_model(cfg, N), {}, sim_config(cfg)};
    s.init = initial_state(cfg, s.model);
    return s;
}

double tolerance_or(const ExperimentConfig& cfg, double fallback) {
    return cfg.options.tolerance > 0.0 ? cfg.options.tolerance : fallback;
}

VerdictReport base_report(const std::string& claim, const ExperimentConfig& cfg, std::vector<Count> Ns) {
    VerdictReport rep;
    rep.claim = claim;
    rep.N_values = std::move(Ns);
    rep.replications = cfg.replications;
    rep.seeds = {cfg.seed};
    return rep;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// k-th smallest value with k = ceil(q n).
double order_stat(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()) - 1e-9));
    k = std::clamp<std::size_t>(k, 1, v.size());
    return v[k - 1];
}

std::vector<Trajectory> run_paths(const Setup& s, std::size_t R) {
    auto runs = replicate(s.model, s.init, s.sim, StopRule::none(), R);
    for (const auto& tr : runs) require_complete(tr);
    return runs;
}

void shift(LimitCurve& curve, double by) {
    if (by == 0.0) return;
    for (auto& row : curve.values) {
        for (auto& x : row) x += by;
    }
}

// Pathwise LLN claims: per replica sup distance on the grid; pass when the
// ceil(q R)-th smallest distance is within tolerance.
VerdictReport pathwise_report(const std::string& claim, const ExperimentConfig& cfg, Count N,
                              const std::vector<double>& sups, double tol) {
    auto rep = base_report(claim, cfg, {N});
    rep.statistic = "order statistic ceil(q R) of per-replica sup distance";
    rep.observed = order_stat(sups, cfg.options.pass_fraction);
    rep.threshold = tol;
    rep.pass = rep.observed <= tol;
    const auto within = std::count_if(sups.begin(), sups.end(), [tol](double d) { return d <= tol; });
    rep.add("within_tolerance", static_cast<double>(within));
    rep.add("pass_fraction", cfg.options.pass_fraction);
    rep.add("median_sup", median_of(sups));
    rep.add("max_sup", *std::max_element(sups.begin(), sups.end()));
    for (std::size_t i = 0; i < sups.size(); ++i) rep.add("sup_" + std::to_string(i), sups[i]);
    return rep;
}

VerdictReport mass_lln(const ExperimentConfig& cfg, Count N) {
    const auto s = setup(cfg, N, {RegimeKind::Dynamic}, "mass-lln");
    const auto runs = run_paths(s, cfg.replications);
    std::vector<double> sups;
    for (const auto& tr : runs) {
        const auto mass = scaled_free_mass(tr);
        auto H = solve_H(cfg.model, mass.at(0), mass.grid);
        shift(H, cfg.options.limit_shift);
        sups.push_back(path_sup_distance(mass, H));
    }
    auto rep = pathwise_report("mass-lln", cfg, N, sups, tolerance_or(cfg, 0.05));
    rep.add("limit_shift", cfg.options.limit_shift);
    return rep;
}

VerdictReport critical_lln(const ExperimentConfig& cfg, Count N) {
    const auto s = setup(cfg, N, {RegimeKind::FixedCritical}, "critical-lln");
    const double root = std::sqrt(static_cast<double>(N));
    std::vector<double> f0(s.init.f.size());
    for (std::size_t j = 0; j < f0.size(); ++j) f0[j] = static_cast<double>(s.init.f[j]) / root;
    auto fbar = critical_ode(cfg.model, f0, s.sim.sample_grid);
    shift(fbar, cfg.options.limit_shift);
    const auto runs = run_paths(s, cfg.replications);
    std::vector<double> sups;
    for (const auto& tr : runs) sups.push_back(path_sup_distance(scaled_free_particles(tr, root), fbar));
    auto rep = pathwise_report("critical-lln", cfg, N, sups, tolerance_or(cfg, 0.1));
    rep.add("limit_shift", cfg.options.limit_shift);
    return rep;
}

VerdictReport overloaded_lln(const ExperimentConfig& cfg, Count N) {
    const auto s = setup(cfg, N, {RegimeKind::FixedOverloaded}, "overloaded-lln");
    const auto n = static_cast<double>(N);
    // The finite model's own agent share keeps the mass constraint exact.
    const double r = static_cast<double>(s.model.agents) / n;
    std::vector<double> f0(s.init.f.size());
    for (std::size_t j = 0; j < f0.size(); ++j) f0[j] = static_cast<double>(s.init.f[j]) / n;
    auto ode = overloaded_ode(cfg.model, r, f0, s.sim.sample_grid);
    shift(ode, cfg.options.limit_shift);
    const auto runs = run_paths(s, cfg.replications);
    std::vector<double> sups;
    std::vector<double> terminal(f0.size(), 0.0);
    for (const auto& tr : runs) {
        sups.push_back(path_sup_distance(scaled_free_particles(tr, n), ode));
        for (std::size_t j = 0; j < f0.size(); ++j) terminal[j] += static_cast<double>(tr.states.back().f[j]) / n;
    }
    const auto eq = overloaded_equilibrium(cfg.model, r);
    double gap = 0.0;
    for (std::size_t j = 0; j < f0.size(); ++j) {
        gap = std::max(gap, std::abs(terminal[j] / static_cast<double>(runs.size()) - eq[j]));
    }
    auto rep = pathwise_report("overloaded-lln", cfg, N, sups, tolerance_or(cfg, 0.03));
    rep.add("terminal_gap", gap);
    rep.add("terminal_tolerance", 0.02);
    rep.pass = rep.pass && gap <= 0.02;
    return rep;
}

VerdictReport collapse(const ExperimentConfig& cfg, Count N) {
    const auto s = setup(cfg, N, {RegimeKind::Dynamic}, "collapse");
    auto rep = collapse_test(run_paths(s, cfg.replications), cfg.model, cfg.options.burn_in);
    rep.seeds = {cfg.seed};
    // Negative control: the start is off the curve by much more than the late residual.
    const double ratio = rep.detail("initial_residual") / std::max(rep.observed, 1e-300);
    rep.add("initial_over_median", ratio);
    rep.pass = rep.pass && ratio > 5.0;
    return rep;
}

EmpiricalOccupation occupation_run(const ExperimentConfig& cfg, Count N, std::initializer_list<RegimeKind> allowed,
                                   const std::string& claim, double& mass0) {
    auto s = setup(cfg, N, allowed, claim);
    s.sim.occupation_windows = equal_windows(cfg.horizon, cfg.options.windows);
    mass0 = static_cast<double>(total_free(s.init)) / static_cast<double>(N);
    return empirical_occupation(run_paths(s, cfg.replications), s.sim.occupation_windows);
}

VerdictReport occupation(const ExperimentConfig& cfg, Count N) {
    double mass0 = 0.0;
    const auto occ = occupation_run(cfg, N, {RegimeKind::Dynamic}, "occupation", mass0);
    const auto H = solve_H(cfg.model, mass0, uniform_grid(cfg.horizon, 2 * cfg.options.windows + 1));
    auto rep = occupation_vs_poisson(occ, H, cfg.model, cfg.options.burn_in);
    const auto probe = occupation_vs_poisson(occ, H, cfg.model, cfg.options.burn_in, 1.0);
    rep.threshold = tolerance_or(cfg, rep.threshold);
    rep.N_values = {N};
    rep.seeds = {cfg.seed};
    rep.add("probe_mean_tv", probe.observed);
    rep.add("probe_threshold", 0.15);
    rep.pass = rep.observed <= rep.threshold && probe.observed > 0.15;
    return rep;
}

VerdictReport drift_balance(const ExperimentConfig& cfg, Count N) {
    double mass0 = 0.0;
    const auto occ =
        occupation_run(cfg, N, {RegimeKind::Dynamic, RegimeKind::FixedOverloaded}, "drift-balance", mass0);
    auto rep = drift_balance_test(occ, cfg.model, cfg.options.burn_in);
    rep.threshold = tolerance_or(cfg, rep.threshold);
    rep.pass = rep.observed <= rep.threshold;
    rep.N_values = {N};
    rep.seeds = {cfg.seed};
    return rep;
}

VerdictReport clt(const ExperimentConfig& cfg, Count N) {
    if (cfg.regime.kind != RegimeKind::FixedCritical) bad("claim clt applies to the critical regime");
    CltOptions opt;
    opt.f0bar = initial_scaled(cfg);
    opt.seed = cfg.seed;
    opt.ks_threshold = tolerance_or(cfg, opt.ks_threshold);
    return clt_marginal_test(cfg.model, cfg.options.t_star, N, cfg.replications, opt);
}

VerdictReport stationary_claim(const ExperimentConfig& cfg, Count N) {
    auto s = setup(cfg, N, {RegimeKind::Dynamic, RegimeKind::FixedCritical}, "stationary");
    const auto table = enumerate_Z(s.model, cfg.options.z_cap);
    s.sim.sample_grid = {0.0};
    s.sim.record_events = true;
    const auto tr = simulate(s.model, s.init, s.sim);
    require_complete(tr);
    const auto law = empirical_state_law(tr, table);
    auto rep = base_report("stationary", cfg, {N});
    rep.replications = 1;
    rep.statistic = "TV between SSA time-average law and the exact stationary law";
    rep.observed = total_variation(law.law, table.probabilities());
    rep.threshold = tolerance_or(cfg, 0.02);
    rep.pass = rep.observed <= rep.threshold;
    rep.add("events", static_cast<double>(tr.event_count));
    rep.add("states", static_cast<double>(table.size()));
    rep.add("outside_share", law.outside);
    return rep;
}

VerdictReport detailed_balance(const ExperimentConfig& cfg, Count N) {
    if (cfg.regime.kind != RegimeKind::FixedCritical) bad("claim detailed-balance applies to the critical regime");
    auto rep = base_report("detailed-balance", cfg, {});
    rep.replications = 0;
    rep.statistic = "max relative detailed-balance residual over the model family";
    rep.threshold = tolerance_or(cfg, 1e-12);
    double worst = 0.0;
    double largest = 0.0;
    for (Count n = static_cast<Count>(cfg.model.types()); n <= N; ++n) {
        FiniteModel m;
        try {
            m = finite_model(cfg, n);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NTooSmall) continue;
            throw;
        }
        double space = 1.0;
        for (Count c : m.C) space *= static_cast<double>(c + 1);
        if (space > static_cast<double>(cfg.options.max_states)) continue;
        worst = std::max(worst, check_detailed_balance(m));
        largest = std::max(largest, space);
        rep.N_values.push_back(n);
    }
    if (rep.N_values.empty()) bad("no model of the family fits in max_states");
    rep.observed = worst;
    rep.pass = worst <= rep.threshold;
    rep.add("models_checked", static_cast<double>(rep.N_values.size()));
    rep.add("largest_space", largest);
    return rep;
}

VerdictReport global_balance(const ExperimentConfig& cfg, Count N) {
    const auto s = setup(cfg, N, {RegimeKind::Dynamic}, "global-balance");
    const auto table = enumerate_Z(s.model, cfg.options.z_cap);
    const auto gb = global_balance_residual(s.model, table);
    auto rep = base_report("global-balance", cfg, {N});
    rep.replications = 0;
    rep.statistic = "max global-balance residual of the product form";
    rep.observed = gb.max_residual;
    rep.threshold = tolerance_or(cfg, 1e-8);
    rep.pass = gb.max_residual <= rep.threshold && !gb.truncation_flagged;
    rep.add("z_cap", static_cast<double>(table.z_cap));
    rep.add("boundary_mass", gb.boundary_mass);
    rep.add("truncation_flagged", gb.truncation_flagged ? 1.0 : 0.0);
    return rep;
}

VerdictReport equilibrium_mass(const ExperimentConfig& cfg, Count) {
    const auto f0 = initial_scaled(cfg);
    const double mass0 = std::accumulate(f0.begin(), f0.end(), 0.0);
    const auto H = solve_H(cfg.model, mass0, uniform_grid(cfg.horizon, cfg.grid_points));
    const auto hinf = h_infinity(cfg.model);
    auto rep = base_report("equilibrium-mass", cfg, {});
    rep.replications = 0;
    rep.statistic = "|H(horizon) - H_inf|";
    rep.observed = std::abs(H.values.back()[0] - hinf.value);
    rep.threshold = tolerance_or(cfg, 1e-6);
    rep.pass = rep.observed <= rep.threshold;
    rep.add("H_terminal", H.values.back()[0]);
    rep.add("H_inf", hinf.value);
    rep.add("H_0", mass0);
    return rep;
}

VerdictReport critical_equilibrium_claim(const ExperimentConfig& cfg, Count) {
    if (cfg.regime.kind != RegimeKind::FixedCritical) bad("claim critical-equilibrium applies to the critical regime");
    const auto f = critical_ode(cfg.model, initial_scaled(cfg), uniform_grid(cfg.horizon, cfg.grid_points));
    const auto eq = critical_equilibrium(cfg.model);
    auto rep = base_report("critical-equilibrium", cfg, {});
    rep.replications = 0;
    rep.statistic = "max_j |fbar_j(horizon) - closed-form equilibrium_j|";
    double gap = 0.0;
    for (std::size_t j = 0; j < eq.size(); ++j) {
        gap = std::max(gap, std::abs(f.values.back()[j] - eq[j]));
        rep.add("equilibrium_" + std::to_string(j), eq[j]);
    }
    rep.observed = gap;
    rep.threshold = tolerance_or(cfg, 1e-6);
    rep.pass = gap <= rep.threshold;
    return rep;
}

VerdictReport queue_claim(const ExperimentConfig& cfg, QueueKind kind) {
    const bool mm1 = kind == QueueKind::MM1;
    const double load = cfg.options.load > 0.0 ? cfg.options.load : (mm1 ? 0.5 : 2.0);
    const Count K = cfg.options.K > 0 ? cfg.options.K : (mm1 ? 12 : 8);
    const BirthDeathSpec spec{kind, load, 1.0, 0};
    const auto x = scaled_hitting_law(spec, K, cfg.replications, cfg.seed);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size() - 1);
    const double cv = std::sqrt(var) / mean;
    auto rep = base_report(mm1 ? "queues-mm1" : "queues-mminf", cfg, {});
    rep.statistic = "KS distance of scaled hitting times to Exponential(1 / sample mean)";
    rep.observed = ks_distance(x, [mean](double v) { return v <= 0.0 ? 0.0 : -std::expm1(-v / mean); });
    rep.threshold = tolerance_or(cfg, 0.04);
    rep.pass = rep.observed <= rep.threshold && cv >= 0.9 && cv <= 1.1;
    rep.add("K", static_cast<double>(K));
    rep.add("load", load);
    rep.add("scaled_mean", mean);
    rep.add("cv", cv);
    return rep;
}

template <class RunFn>
VerdictReport dominance_report(const std::string& claim, const ExperimentConfig& cfg, Count N, RunFn run) {
    const std::size_t R = cfg.replications;
    std::vector<CouplingRun> runs(R);
    parallel_for(R, [&](std::size_t i) { runs[i] = run(i); });
    auto rep = base_report(claim, cfg, {N});
    rep.statistic = "coupled paths violating the dominance";
    std::size_t violations = 0;
    Count slack = std::numeric_limits<Count>::max();
    double events = 0.0;
    for (const auto& r : runs) {
        violations += r.dominated ? 0 : 1;
        slack = std::min(slack, r.min_slack);
        events += static_cast<double>(r.events);
    }
    rep.observed = static_cast<double>(violations);
    rep.threshold = 0.0;
    rep.pass = violations == 0;
    rep.add("min_slack", static_cast<double>(slack));
    rep.add("mean_events", events / static_cast<double>(R));
    return rep;
}

VerdictReport dominance_lem1op(const ExperimentConfig& cfg, Count N) {
    const auto s = setup(cfg, N, {RegimeKind::Dynamic}, "dominance-lem1op");
    const double raw = to_raw_time(s.sim.timescale, N, cfg.horizon);
    const double a = cfg.options.a;
    const auto rates = lem1op_rates(s.model, a);
    auto rep = dominance_report("dominance-lem1op", cfg, N, [&](std::size_t i) {
        return coupled_lem1op(s.model, s.init, a, rates, raw, cfg.seed, i);
    });
    rep.add("a", a);
    rep.add("queue_input", rates.input);
    rep.add("queue_service", rates.service);
    return rep;
}

VerdictReport dominance_lemcl1(const ExperimentConfig& cfg, Count N) {
    const auto s = setup(cfg, N, {RegimeKind::FixedOverloaded}, "dominance-lemcl1");
    const double raw = to_raw_time(s.sim.timescale, N, cfg.horizon);
    const auto rates = lemcl1_rates(s.model);
    auto rep = dominance_report("dominance-lemcl1", cfg, N, [&](std::size_t i) {
        return coupled_lemcl1(s.model, s.init, rates, raw, cfg.seed, i);
    });
    rep.add("queue_input", rates.input);
    rep.add("queue_service", rates.service);
    return rep;
}

VerdictReport coupling_propcoup(const ExperimentConfig& cfg, Count N) {
    const auto s = setup(cfg, N, {RegimeKind::FixedCritical}, "coupling-propcoup");
    const double raw = to_raw_time(s.sim.timescale, N, cfg.horizon);
    return dominance_report("coupling-propcoup", cfg, N, [&](std::size_t i) {
        return coupled_propcoup(s.model, s.init, raw, cfg.seed, i);
    });
}

VerdictReport agent_vanishing(const ExperimentConfig& cfg, Count) {
    if (cfg.N_list.size() < 2) bad("claim agent-vanishing needs an N_list with at least two sizes");
    auto rep = base_report("agent-vanishing", cfg, cfg.N_list);
    rep.statistic = "worst ratio of successive 95th percentiles of sup_t Z / sqrt(N)";
    rep.columns = {"N", "p95_sup_z_over_sqrtN"};
    std::vector<double> q;
    for (Count N : cfg.N_list) {
        auto s = setup(cfg, N, {RegimeKind::Dynamic}, "agent-vanishing");
        s.sim.sample_grid = {0.0};
        std::vector<double> peaks;
        for (const auto& tr : run_paths(s, cfg.replications)) {
            peaks.push_back(static_cast<double>(tr.max_z) / std::sqrt(static_cast<double>(N)));
        }
        q.push_back(order_stat(peaks, 0.95));
        rep.rows.push_back({static_cast<double>(N), q.back()});
    }
    double worst = 0.0;
    for (std::size_t k = 1; k < q.size(); ++k) worst = std::max(worst, q[k] / q[k - 1]);
    rep.observed = worst;
    rep.threshold = 1.0;
    rep.pass = worst < 1.0;
    return rep;
}

using ClaimFn = std::function<VerdictReport(const ExperimentConfig&, Count)>;

const std::vector<std::pair<std::string, ClaimFn>>& registry() {
    static const std::vector<std::pair<std::string, ClaimFn>> table{
        {"stationary", stationary_claim},
        {"detailed-balance", detailed_balance},
        {"global-balance", global_balance},
        {"equilibrium-mass", equilibrium_mass},
        {"critical-equilibrium", critical_equilibrium_claim},
        {"mass-lln", mass_lln},
        {"collapse", collapse},
        {"occupation", occupation},
        {"drift-balance", drift_balance},
        {"critical-lln", critical_lln},
        {"clt", clt},
        {"overloaded-lln", overloaded_lln},
        {"queues-mm1", [](const ExperimentConfig& c, Count) { return queue_claim(c, QueueKind::MM1); }},
        {"queues-mminf", [](const ExperimentConfig& c, Count) { return queue_claim(c, QueueKind::MMInf); }},
        {"dominance-lem1op", dominance_lem1op},
        {"dominance-lemcl1", dominance_lemcl1},
        {"coupling-propcoup", coupling_propcoup},
        {"agent-vanishing", agent_vanishing},
    };
    return table;
}

const ClaimFn& lookup(const std::string& claim) {
    for (const auto& [name, fn] : registry()) {
        if (name == claim) return fn;
    }
    bad("unknown claim '" + claim + "'");
}

}  // namespace

const std::vector<std::string>& claim_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& entry : registry()) out.push_back(entry.first);
        return out;
    }();
    return names;
}

bool is_claim(const std::string& name) {
    const auto& names = claim_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

VerdictReport run_claim(const std::string& claim, const ExperimentConfig& config) {
    const auto& fn = lookup(claim);
    validate(config);
    return fn(config, config.N());
}

bool is_sweepable(const std::string& claim) {
    return claim == "mass-lln" || claim == "critical-lln" || claim == "overloaded-lln" || claim == "collapse" ||
           claim == "occupation";
}

double claim_statistic(const std::string& claim, const ExperimentConfig& config, Count N) {
    if (!is_sweepable(claim)) bad("claim " + claim + " has no sweep statistic");
    const auto rep = lookup(claim)(config, N);
    if (claim == "collapse" || claim == "occupation") return rep.observed;
    return rep.detail("median_sup");
}

VerdictReport run_sweep(const std::string& claim, const ExperimentConfig& config) {
    validate(config);
    if (!is_sweepable(claim)) bad("claim " + claim + " has no sweep statistic");
    auto rep = convergence_table(claim, config.N_list, config.replications,
                                 [&](Count N) { return claim_statistic(claim, config, N); });
    rep.seeds = {config.seed};
    return rep;
}

namespace {

ExperimentConfig canonical(RegimeRequest regime, Count N, std::size_t R, double horizon, std::size_t points) {
    ExperimentConfig c;
    c.model = ModelParams{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 1.0, 2.0};
    c.regime = regime;
    c.N_list = {N};
    c.replications = R;
    c.horizon = horizon;
    c.grid_points = points;
    c.seed = 20240601;
    return c;
}

InitialSpec explicit_init(std::vector<double> f0) { return InitialSpec{InitKind::Explicit, std::move(f0), 0.0, 0}; }

}  // namespace

std::vector<SuiteCase> desk_suite() {
    std::vector<SuiteCase> out;
    const auto dyn = RegimeRequest::dynamic();
    const auto crit = RegimeRequest::critical();
    const auto over = RegimeRequest::overloaded(0.4);

    {
        ExperimentConfig c = canonical(crit, 2, 1, 437'500.0, 2);
        c.model = ModelParams{{1.0}, {1.0}, {1.0}, 0.0, 1.0};
        c.timescale = Timescale::Raw;
        c.initial = explicit_init({0.0});
        out.push_back({"exactness vs enumeration", "stationary", c});
    }
    {
        ExperimentConfig c = canonical(crit, 400, 1, 1.0, 2);
        out.push_back({"detailed balance", "detailed-balance", c});
    }
    {
        ExperimentConfig c = canonical(dyn, 1, 1, 1.0, 2);
        c.model = ModelParams{{1.0}, {1.0}, {1.0}, 1.0, 1.0};
        c.options.z_cap = 20;
        out.push_back({"product-form global balance", "global-balance", c});
    }
    {
        ExperimentConfig c = canonical(dyn, 2000, 20, 3.0, 301);
        c.initial = explicit_init({0.45, 0.45});
        out.push_back({"mass LLN", "mass-lln", c});
    }
    {
        ExperimentConfig c = canonical(dyn, 2000, 1, 50.0, 2);
        c.initial = explicit_init({0.45, 0.45});
        out.push_back({"equilibrium mass", "equilibrium-mass", c});
    }
    ExperimentConfig off_curve = canonical(dyn, 2000, 20, 3.0, 301);
    off_curve.initial = explicit_init({0.1, 0.5});
    out.push_back({"state-space collapse", "collapse", off_curve});
    out.push_back({"occupation Poisson law", "occupation", off_curve});
    {
        ExperimentConfig c = canonical(crit, 10'000, 20, 2.0, 201);
        c.initial = explicit_init({0.2, 0.6});
        out.push_back({"critical LLN", "critical-lln", c});
    }
    {
        ExperimentConfig c = canonical(crit, 10'000, 1, 50.0, 2);
        c.initial = explicit_init({0.2, 0.6});
        out.push_back({"critical equilibrium", "critical-equilibrium", c});
    }
    {
        ExperimentConfig c = canonical(crit, 10'000, 1000, 1.0, 2);
        c.options.t_star = 1.0;
        out.push_back({"CLT marginal", "clt", c});
    }
    {
        ExperimentConfig c = canonical(over, 4000, 20, 3.0, 301);
        c.initial = explicit_init({0.45, 0.15});
        out.push_back({"overloaded LLN", "overloaded-lln", c});
    }
    out.push_back({"M/M/1 hitting law", "queues-mm1", canonical(dyn, 2, 2000, 1.0, 2)});
    out.push_back({"M/M/inf hitting law", "queues-mminf", canonical(dyn, 2, 2000, 1.0, 2)});
    {
        ExperimentConfig c = canonical(dyn, 200, 1000, 1.0, 2);
        c.initial = explicit_init({0.45, 0.45});
        out.push_back({"dynamic-regime dominance", "dominance-lem1op", c});
    }
    {
        ExperimentConfig c = canonical(over, 1000, 1000, 1.0, 2);
        out.push_back({"overloaded-regime dominance", "dominance-lemcl1", c});
    }
    {
        ExperimentConfig c = canonical(crit, 10'000, 1000, 1.0, 2);
        c.initial = explicit_init({0.2, 0.6});
        out.push_back({"critical-regime coupling", "coupling-propcoup", c});
    }
    {
        ExperimentConfig c = canonical(dyn, 250, 40, 1.0, 2);
        c.N_list = {250, 1000, 4000};
        c.initial = explicit_init({0.45, 0.45});
        out.push_back({"fast-agent vanishing", "agent-vanishing", c});
    }
    return out;
}

}  // namespace pairlim
