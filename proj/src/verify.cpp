#include "pairlim/verify.hpp"

#include "pairlim/error.hpp"
#include "pairlim/limits.hpp"
#include "pairlim/parallel.hpp"
#include "pairlim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pairlim {

double VerdictReport::detail(const std::string& name) const {
    for (const auto& [k, v] : details) {
        if (k == name) return v;
    }
    throw Error(ErrorCode::InvalidConfig, "report has no detail named " + name);
}

double ks_distance(std::vector<double> samples, const Cdf& cdf, const Cdf& left) {
    if (samples.size() < 2) throw Error(ErrorCode::EmptySample, "KS distance needs at least 2 samples");
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t k = i;
        while (k < samples.size() && samples[k] == samples[i]) ++k;
        const double x = samples[i];
        const double below = static_cast<double>(i) / n;
        const double upto = static_cast<double>(k) / n;
        const double fx = cdf(x);
        const double fl = left ? left(x) : fx;
        d = std::max({d, std::abs(upto - fx), std::abs(below - fl)});
        i = k;
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::EmptySample, "KS distance needs at least 2 samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto n = static_cast<double>(a.size());
    const auto m = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t k = 0;
    double d = 0.0;
    while (i < a.size() && k < b.size()) {
        const double x = std::min(a[i], b[k]);
        while (i < a.size() && a[i] <= x) ++i;
        while (k < b.size() && b[k] <= x) ++k;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(k) / m));
    }
    return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const auto dn = static_cast<double>(n);
    const auto dm = static_cast<double>(m);
    return c * std::sqrt((dn + dm) / (dn * dm));
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t n = std::max(p.size(), q.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = i < p.size() ? p[i] : 0.0;
        const double b = i < q.size() ? q[i] : 0.0;
        s += std::abs(a - b);
    }
    return 0.5 * s;
}

std::vector<double> poisson_pmf(double mean, std::size_t size) {
    std::vector<double> p(size);
    for (std::size_t k = 0; k < size; ++k) {
        const auto kd = static_cast<double>(k);
        p[k] = mean == 0.0 ? (k == 0 ? 1.0 : 0.0) : std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
    }
    return p;
}

namespace {

double tv_with_tail(const std::vector<double>& law, const std::vector<double>& ref) {
    double s = 0.0;
    double covered = 0.0;
    for (std::size_t k = 0; k < law.size(); ++k) {
        s += std::abs(law[k] - ref[k]);
        covered += ref[k];
    }
    return 0.5 * (s + std::max(0.0, 1.0 - covered));
}

}  // namespace

double tv_to_poisson(const std::vector<double>& law, double mean) {
    return tv_with_tail(law, poisson_pmf(mean, law.size()));
}

std::vector<double> geometric_pmf(double ratio, std::size_t size) {
    std::vector<double> p(size);
    for (std::size_t k = 0; k < size; ++k) p[k] = (1.0 - ratio) * std::pow(ratio, static_cast<double>(k));
    return p;
}

double tv_to_geometric(const std::vector<double>& law, double ratio) {
    return tv_with_tail(law, geometric_pmf(ratio, law.size()));
}

double path_sup_distance(const LimitCurve& sim, const LimitCurve& limit) {
    if (sim.size() != limit.size() || sim.dim() != limit.dim()) {
        throw Error(ErrorCode::GridMismatch, "curves differ in length or dimension");
    }
    double d = 0.0;
    for (std::size_t k = 0; k < sim.size(); ++k) {
        const double scale = std::max(1.0, std::abs(limit.grid[k]));
        if (std::abs(sim.grid[k] - limit.grid[k]) > 1e-12 * scale) {
            throw Error(ErrorCode::GridMismatch, "curves are sampled on different grids");
        }
        for (std::size_t j = 0; j < sim.dim(); ++j) d = std::max(d, std::abs(sim.at(k, j) - limit.at(k, j)));
    }
    return d;
}

double collapse_residual(const ModelParams& params, const std::vector<double>& f) {
    const double mass = std::accumulate(f.begin(), f.end(), 0.0);
    const auto on_curve = collapse_point(params, mass);
    double r = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) r = std::max(r, std::abs(f[j] - on_curve[j]));
    return r;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) throw Error(ErrorCode::EmptySample, "median of an empty sample");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

}  // namespace

VerdictReport collapse_test(const std::vector<Trajectory>& trajs, const ModelParams& params, double burn_in) {
    if (trajs.empty()) throw Error(ErrorCode::EmptySample, "collapse test needs trajectories");
    const auto& first = trajs.front();
    if (first.model.regime != RegimeKind::Dynamic) {
        throw Error(ErrorCode::UnsupportedRegime, "collapse test applies to the dynamic regime");
    }
    const auto N = static_cast<double>(first.model.N);
    const std::size_t J = first.model.types();
    const double cutoff = burn_in * first.config.horizon;
    const std::size_t points = first.times.size();
    for (const auto& tr : trajs) {
        if (tr.times != first.times) throw Error(ErrorCode::MismatchedReplicas, "replicas sampled on different grids");
    }
    std::vector<double> per_time(points, 0.0);
    std::vector<double> f(J);
    for (std::size_t k = 0; k < points; ++k) {
        for (const auto& tr : trajs) {
            for (std::size_t j = 0; j < J; ++j) f[j] = static_cast<double>(tr.states[k].f[j]) / N;
            per_time[k] += collapse_residual(params, f);
        }
        per_time[k] /= static_cast<double>(trajs.size());
    }
    std::vector<double> late;
    for (std::size_t k = 0; k < points; ++k) {
        if (first.times[k] > cutoff) late.push_back(per_time[k]);
    }
    VerdictReport rep;
    rep.claim = "collapse";
    rep.statistic = "median collapse residual after burn-in";
    rep.observed = median(late);
    rep.threshold = std::max(0.03, 5.0 / std::sqrt(N));
    rep.pass = rep.observed <= rep.threshold;
    rep.N_values = {first.model.N};
    rep.replications = trajs.size();
    rep.seeds = {first.config.seed};
    rep.add("initial_residual", per_time.empty() ? 0.0 : per_time.front());
    rep.add("burn_in_time", cutoff);
    rep.add("max_late_residual", *std::max_element(late.begin(), late.end()));
    return rep;
}

VerdictReport occupation_vs_poisson(const EmpiricalOccupation& occ, const LimitCurve& H, const ModelParams& params,
                                    double burn_in, double phi_offset) {
    if (occ.windows.empty()) throw Error(ErrorCode::EmptySample, "no occupation windows");
    PhiSolver solver(params);
    const double horizon = occ.boundaries.back();
    const double cutoff = burn_in * horizon;
    VerdictReport rep;
    rep.claim = "occupation";
    rep.statistic = "mean window TV between z sojourn law and Poisson(phi(H))";
    rep.threshold = 0.05;
    rep.replications = occ.replicas;
    double sum = 0.0;
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t w = 0; w < occ.windows.size(); ++w) {
        const auto& win = occ.windows[w];
        if (win.begin < cutoff - 1e-12) continue;
        const double mid = 0.5 * (win.begin + win.end);
        const auto it = std::find_if(H.grid.begin(), H.grid.end(),
                                     [mid](double t) { return std::abs(t - mid) <= 1e-9 * std::max(1.0, mid); });
        if (it == H.grid.end()) {
            throw Error(ErrorCode::GridMismatch, "window midpoint " + std::to_string(mid) + " is not on the H grid");
        }
        const double h = H.at(static_cast<std::size_t>(it - H.grid.begin()));
        const double tv = tv_to_poisson(win.z_law, solver(h) + phi_offset);
        rep.add("tv_window_" + std::to_string(w), tv);
        sum += tv;
        worst = std::max(worst, tv);
        ++used;
    }
    if (used == 0) throw Error(ErrorCode::EmptySample, "every window falls inside the burn-in");
    rep.observed = sum / static_cast<double>(used);
    rep.pass = rep.observed <= rep.threshold;
    rep.add("max_window_tv", worst);
    rep.add("phi_offset", phi_offset);
    return rep;
}

std::vector<double> drift_balance_integrand(const ModelParams& params, const std::vector<double>& x) {
    const auto d = overloaded_drift(params, x);
    std::vector<double> out(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) out[j] = -d[j];
    return out;
}

VerdictReport drift_balance_test(const EmpiricalOccupation& occ, const ModelParams& params, double burn_in) {
    if (occ.windows.empty()) throw Error(ErrorCode::EmptySample, "no occupation windows");
    const double cutoff = burn_in * occ.boundaries.back();
    const std::size_t J = params.types();
    VerdictReport rep;
    rep.claim = "drift-balance";
    rep.statistic = "max window |average drift integrand| / (eta_j c_j)";
    rep.threshold = 0.05;
    rep.replications = occ.replicas;
    double worst = 0.0;
    std::size_t used = 0;
    for (std::size_t w = 0; w < occ.windows.size(); ++w) {
        const auto& win = occ.windows[w];
        if (win.begin < cutoff - 1e-12 || win.f_samples.empty()) continue;
        std::vector<double> avg(J, 0.0);
        for (const auto& x : win.f_samples) {
            const auto g = drift_balance_integrand(params, x);
            for (std::size_t j = 0; j < J; ++j) avg[j] += g[j];
        }
        for (std::size_t j = 0; j < J; ++j) {
            avg[j] /= static_cast<double>(win.f_samples.size());
            const double rel = std::abs(avg[j]) / (params.eta[j] * params.c[j]);
            worst = std::max(worst, rel);
            rep.add("window_" + std::to_string(w) + "_type_" + std::to_string(j), avg[j]);
        }
        ++used;
    }
    if (used == 0) throw Error(ErrorCode::EmptySample, "no grid samples after the burn-in");
    rep.observed = worst;
    rep.pass = worst <= rep.threshold;
    return rep;
}

VerdictReport clt_marginal_test(const ModelParams& params, double t_star, Count N, std::size_t R,
                                const CltOptions& options) {
    validate(params);
    const std::size_t J = params.types();
    if (options.f0bar.size() != J) throw Error(ErrorCode::DimensionMismatch, "f0bar has the wrong length");
    if (!(t_star > 0.0) || R < 2) throw Error(ErrorCode::InvalidConfig, "need t_star > 0 and R >= 2");
    const auto model = build_finite(params, N, RegimeRequest::critical());
    const double sqrtN = std::sqrt(static_cast<double>(N));
    const double quartN = std::sqrt(sqrtN);

    std::vector<Count> F0(J);
    std::vector<double> fhat0(J);
    for (std::size_t j = 0; j < J; ++j) {
        F0[j] = std::clamp<Count>(std::llround(sqrtN * options.f0bar[j]), 0, model.C[j]);
        fhat0[j] = (static_cast<double>(F0[j]) - sqrtN * options.f0bar[j]) / quartN;
    }
    const auto points = static_cast<std::size_t>(std::ceil(t_star / 0.01)) + 1;
    const auto grid = uniform_grid(t_star, points);
    const auto fbar = critical_ode(params, options.f0bar, grid);
    const auto& fbar_end = fbar.values.back();

    SimConfig cfg;
    cfg.horizon = t_star;
    cfg.timescale = Timescale::Critical;
    cfg.sample_grid = {t_star};
    cfg.seed = options.seed;
    const auto paths = replicate(model, make_state(model, F0), cfg, StopRule::none(), R);

    // The SSA statistic lives on a lattice of spacing N^{-1/4}. Spreading each
    // sample uniformly over its cell removes the lattice steps from the KS
    // comparison with the continuous diffusion marginal.
    std::vector<std::vector<double>> ssa(J, std::vector<double>(R));
    std::vector<std::vector<double>> lattice(J, std::vector<double>(R));
    Rng jitter(options.seed + 3, 0);
    for (std::size_t i = 0; i < R; ++i) {
        require_complete(paths[i]);
        for (std::size_t j = 0; j < J; ++j) {
            lattice[j][i] = (static_cast<double>(paths[i].states.back().f[j]) - sqrtN * fbar_end[j]) / quartN;
            ssa[j][i] = lattice[j][i] + (jitter.uniform() - 0.5) / quartN;
        }
    }
    auto diffusion_sample = [&](std::uint64_t seed) {
        std::vector<std::vector<double>> out(J, std::vector<double>(R));
        parallel_for(R, [&](std::size_t i) {
            const auto path = clt_diffusion(params, fbar, fhat0, seed, DiffusionOptions{}, i);
            for (std::size_t j = 0; j < J; ++j) out[j][i] = path.values.back()[j];
        });
        return out;
    };
    const auto diff = diffusion_sample(options.seed + 1);
    const auto null = diffusion_sample(options.seed + 2);

    VerdictReport rep;
    rep.claim = "clt";
    rep.statistic = "max per-coordinate two-sample KS (SSA vs diffusion)";
    rep.threshold = options.ks_threshold;
    rep.N_values = {N};
    rep.replications = R;
    rep.seeds = {options.seed, options.seed + 1, options.seed + 2, options.seed + 3};
    // Null control at family-wise level 5% over the J coordinates.
    const double critical = ks_critical_value(R, R, 0.05 / static_cast<double>(J));
    double worst = 0.0;
    double worst_null = 0.0;
    double worst_var = 0.0;
    auto variance = [](const std::vector<double>& v) {
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return s / static_cast<double>(v.size() - 1);
    };
    for (std::size_t j = 0; j < J; ++j) {
        const double ks = ks_two_sample(ssa[j], diff[j]);
        const double ks_null = ks_two_sample(null[j], diff[j]);
        const double var_ratio = variance(ssa[j]) / variance(diff[j]);
        worst = std::max(worst, ks);
        worst_null = std::max(worst_null, ks_null);
        worst_var = std::max(worst_var, std::abs(var_ratio - 1.0));
        const std::string tag = "_" + std::to_string(j);
        rep.add("ks" + tag, ks);
        rep.add("ks_null" + tag, ks_null);
        rep.add("ks_lattice" + tag, ks_two_sample(lattice[j], diff[j]));
        rep.add("variance_ratio" + tag, var_ratio);
        rep.add("ssa_mean" + tag, std::accumulate(ssa[j].begin(), ssa[j].end(), 0.0) / static_cast<double>(R));
        rep.add("diffusion_mean" + tag, std::accumulate(diff[j].begin(), diff[j].end(), 0.0) / static_cast<double>(R));
    }
    rep.observed = worst;
    rep.add("ks_null_max", worst_null);
    rep.add("ks_critical_null", critical);
    rep.add("max_variance_gap", worst_var);
    const bool null_ok = worst_null <= critical;
    const bool var_ok = worst_var <= options.variance_tolerance;
    rep.add("null_control_pass", null_ok ? 1.0 : 0.0);
    rep.add("variance_check_pass", var_ok ? 1.0 : 0.0);
    rep.pass = worst <= rep.threshold && null_ok && var_ok;
    return rep;
}

VerdictReport convergence_table(const std::string& claim, const std::vector<Count>& N_list, std::size_t R,
                                const std::function<double(Count)>& statistic) {
    if (N_list.empty()) throw Error(ErrorCode::InvalidConfig, "convergence table needs at least one N");
    for (std::size_t k = 1; k < N_list.size(); ++k) {
        if (N_list[k] <= N_list[k - 1]) throw Error(ErrorCode::InvalidConfig, "N list must increase");
    }
    VerdictReport rep;
    rep.claim = claim;
    rep.statistic = "statistic per N (non-increasing, 10% inversion tolerance)";
    rep.N_values = N_list;
    rep.replications = R;
    rep.columns = {"N", "statistic"};
    std::vector<double> s;
    for (Count N : N_list) {
        s.push_back(statistic(N));
        rep.rows.push_back({static_cast<double>(N), s.back()});
    }
    bool ok = true;
    double worst_ratio = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        const double ratio = s[k - 1] > 0.0 ? s[k] / s[k - 1] : (s[k] > 0.0 ? INFINITY : 0.0);
        worst_ratio = std::max(worst_ratio, ratio);
        if (s[k] > 1.1 * s[k - 1]) ok = false;
    }
    const double span = static_cast<double>(N_list.back()) / static_cast<double>(N_list.front());
    if (span >= 4.0) {
        const double required = s.front() * std::pow(1.0 / span, 0.25);
        rep.add("required_last", required);
        if (s.back() > required) ok = false;
    }
    rep.observed = worst_ratio;
    rep.threshold = 1.1;
    rep.add("last_value", s.back());
    rep.pass = ok;
    return rep;
}

}  // namespace pairlim
