#include "pairlim/queues.hpp"

#include "pairlim/error.hpp"
#include "pairlim/parallel.hpp"
#include "pairlim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pairlim {

std::string to_string(QueueKind kind) { return kind == QueueKind::MM1 ? "mm1" : "mminf"; }

void validate(const BirthDeathSpec& spec) {
    if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma)) {
        throw Error(ErrorCode::NonPositiveRate, "arrival rate must be non-negative");
    }
    if (!(spec.mu > 0.0) || !std::isfinite(spec.mu)) throw Error(ErrorCode::NonPositiveRate, "service rate must be positive");
    if (spec.init < 0) throw Error(ErrorCode::InvalidInit, "initial queue length must be non-negative");
}

BdPath bd_simulate(const BirthDeathSpec& spec, double horizon, std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t max_events) {
    validate(spec);
    if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidConfig, "horizon must be positive");
    BdPath path;
    path.horizon = horizon;
    Rng rng(seed, stream);
    Count z = spec.init;
    double t = 0.0;
    path.times.push_back(0.0);
    path.states.push_back(z);
    for (std::uint64_t n = 0;; ++n) {
        const double up = bd_up_rate(spec, z);
        const double down = bd_down_rate(spec, z);
        const double total = up + down;
        if (total <= 0.0) break;
        t += rng.exponential(total);
        if (t > horizon) break;
        if (n >= max_events) {
            path.truncated = true;
            path.horizon = t;
            break;
        }
        z += rng.uniform() * total < up ? 1 : -1;
        path.times.push_back(t);
        path.states.push_back(z);
    }
    return path;
}

std::vector<double> occupancy_law(const BdPath& path) {
    const Count top = *std::max_element(path.states.begin(), path.states.end());
    std::vector<double> law(static_cast<std::size_t>(top) + 1, 0.0);
    for (std::size_t k = 0; k < path.states.size(); ++k) {
        const double end = k + 1 < path.times.size() ? path.times[k + 1] : path.horizon;
        law[static_cast<std::size_t>(path.states[k])] += end - path.times[k];
    }
    for (auto& p : law) p /= path.horizon;
    return law;
}

Count bd_value_at(const BdPath& path, double t) {
    const auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
    if (it == path.times.begin()) return path.states.front();
    return path.states[static_cast<std::size_t>(it - path.times.begin()) - 1];
}

HittingTime hitting_time(const BirthDeathSpec& spec, Count K, std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t max_events) {
    validate(spec);
    HittingTime out;
    if (K <= spec.init) return out;
    if (spec.gamma == 0.0) {
        out.converged = false;
        out.time = std::numeric_limits<double>::infinity();
        return out;
    }
    Rng rng(seed, stream);
    Count z = spec.init;
    double t = 0.0;
    while (z < K) {
        if (out.events >= max_events) {
            out.converged = false;
            break;
        }
        const double up = spec.gamma;
        const double down = bd_down_rate(spec, z);
        const double total = up + down;
        t += rng.exponential(total);
        z += rng.uniform() * total < up ? 1 : -1;
        ++out.events;
    }
    out.time = t;
    return out;
}

double hitting_scale(const BirthDeathSpec& spec, Count K) {
    const double k = static_cast<double>(K);
    const double log_scale = k * std::log(spec.gamma / spec.mu);
    if (spec.kind == QueueKind::MM1) return std::exp(log_scale);
    return std::exp(log_scale - std::lgamma(k));
}

std::vector<double> scaled_hitting_law(const BirthDeathSpec& spec, Count K, std::size_t R, std::uint64_t seed) {
    validate(spec);
    if (spec.kind == QueueKind::MM1 && spec.gamma >= spec.mu) {
        throw Error(ErrorCode::UnstableMM1, "scaled hitting law needs gamma < mu");
    }
    if (!(spec.gamma > 0.0)) throw Error(ErrorCode::NonPositiveRate, "arrival rate must be positive");
    if (K < 1 || R == 0) throw Error(ErrorCode::InvalidConfig, "need K >= 1 and R >= 1");
    const double scale = hitting_scale(spec, K);
    std::vector<double> out(R);
    parallel_for(R, [&](std::size_t i) {
        const auto h = hitting_time(spec, K, seed, i);
        if (!h.converged) {
            throw Error(ErrorCode::Nonconvergence, "hitting time replicate " + std::to_string(i) + " hit the event cap");
        }
        out[i] = scale * h.time;
    });
    return out;
}

double mminf_mean(const BirthDeathSpec& spec, double t) {
    const double m = spec.gamma / spec.mu;
    return m + (static_cast<double>(spec.init) - m) * std::exp(-spec.mu * t);
}

namespace {

double eta_max(const ModelParams& p) { return *std::max_element(p.eta.begin(), p.eta.end()); }
double lambda_min(const ModelParams& p) { return *std::min_element(p.lambda.begin(), p.lambda.end()); }

/// Picks a slot in [first, last) proportionally to rates.
std::size_t pick_slot(const std::vector<double>& rates, std::size_t first, std::size_t last, double u) {
    double total = 0.0;
    for (std::size_t s = first; s < last; ++s) total += rates[s];
    double x = u * total;
    std::size_t s = first;
    for (; s + 1 < last; ++s) {
        if (x < rates[s]) break;
        x -= rates[s];
    }
    while (rates[s] <= 0.0 && s > first) --s;
    return s;
}

/// One coupled run of the pairing chain's agent count against an MMInf queue.
/// `up_slots` / `down_slots` list which rate slots move z up / down.
template <class StopFn>
CouplingRun couple_with_queue(const FiniteModel& model, const State& init, const QueueRates& q, double horizon,
                              const std::vector<std::size_t>& up_slots, const std::vector<std::size_t>& down_slots,
                              StopFn should_stop, std::uint64_t seed, std::uint64_t stream) {
    require_valid(model, init);
    const std::size_t J = model.types();
    Rng rng(seed, stream);
    std::vector<Count> f = init.f;
    Count z = init.z;
    Count L = init.z;
    std::vector<double> rates(rate_slots(J));
    std::vector<double> sub(rate_slots(J));
    CouplingRun run;
    run.min_slack = L - z;
    double t = 0.0;
    while (!should_stop(f)) {
        fill_rates(model, f, z, rates);
        double up_z = 0.0;
        double down_z = 0.0;
        for (auto s : up_slots) up_z += rates[s];
        for (auto s : down_slots) down_z += rates[s];
        const double up_l = q.input;
        const double down_l = q.service * static_cast<double>(L);
        const double up_max = std::max(up_z, up_l);
        const double down_max = std::max(down_z, down_l);
        const double total = up_max + down_max;
        if (total <= 0.0) break;
        t += rng.exponential(total);
        if (t > horizon) break;
        const double u = rng.uniform() * total;
        const double pick = rng.uniform();
        std::fill(sub.begin(), sub.end(), 0.0);
        if (u < up_max) {
            if (u < up_l) ++L;
            if (u < up_z) {
                for (auto s : up_slots) sub[s] = rates[s];
                apply_slot(pick_slot(sub, 0, sub.size(), pick), J, f, z);
            }
        } else {
            const double v = u - up_max;
            if (v < down_l) --L;
            if (v < down_z) {
                for (auto s : down_slots) sub[s] = rates[s];
                apply_slot(pick_slot(sub, 0, sub.size(), pick), J, f, z);
            }
        }
        ++run.events;
        run.min_slack = std::min(run.min_slack, L - z);
        if (z > L) run.dominated = false;
    }
    run.end_time = std::min(t, horizon);
    return run;
}

}  // namespace

QueueRates lemcl1_rates(const FiniteModel& model) {
    const double r = static_cast<double>(model.agents) / static_cast<double>(model.N);
    const auto N = static_cast<double>(model.N);
    return {eta_max(model.params) * N, lambda_min(model.params) * r * N / 2.0};
}

CouplingRun coupled_lemcl1(const FiniteModel& model, const State& init, const QueueRates& rates, double horizon,
                           std::uint64_t seed, std::uint64_t stream) {
    if (model.regime != RegimeKind::FixedOverloaded) {
        throw Error(ErrorCode::UnsupportedRegime, "this coupling is defined for the overloaded regime");
    }
    const std::size_t J = model.types();
    std::vector<std::size_t> up;
    std::vector<std::size_t> down;
    for (std::size_t j = 0; j < J; ++j) {
        down.push_back(j);
        up.push_back(J + j);
    }
    return couple_with_queue(model, init, rates, horizon, up, down, [](const std::vector<Count>&) { return false; },
                             seed, stream);
}

QueueRates lem1op_rates(const FiniteModel& model, double a) {
    const auto N = static_cast<double>(model.N);
    return {2.0 * eta_max(model.params) * N, model.params.delta + a * lambda_min(model.params) * N};
}

CouplingRun coupled_lem1op(const FiniteModel& model, const State& init, double a, const QueueRates& rates,
                           double horizon, std::uint64_t seed, std::uint64_t stream) {
    if (model.regime != RegimeKind::Dynamic) {
        throw Error(ErrorCode::UnsupportedRegime, "this coupling is defined for the dynamic regime");
    }
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::InvalidConfig, "a must lie in (0, 1)");
    const std::size_t J = model.types();
    std::vector<std::size_t> up;
    std::vector<std::size_t> down;
    for (std::size_t j = 0; j < J; ++j) {
        down.push_back(j);
        up.push_back(J + j);
    }
    up.push_back(2 * J);
    down.push_back(2 * J + 1);
    const double level = a * static_cast<double>(model.N);
    return couple_with_queue(
        model, init, rates, horizon, up, down,
        [level](const std::vector<Count>& f) { return static_cast<double>(total_free(f)) <= level; }, seed, stream);
}

CouplingRun coupled_propcoup(const FiniteModel& model, const State& init, double horizon, std::uint64_t seed,
                             std::uint64_t stream) {
    if (model.regime != RegimeKind::FixedCritical) {
        throw Error(ErrorCode::UnsupportedRegime, "this coupling is defined for the critical regime");
    }
    require_valid(model, init);
    const std::size_t J = model.types();
    const auto& p = model.params;
    const double up_x = eta_max(p) * static_cast<double>(model.N);
    const double lam = lambda_min(p);
    Rng rng(seed, stream);
    std::vector<Count> f = init.f;
    Count z = init.z;
    std::vector<Count> X(J, 0);
    std::vector<double> weight(J);
    CouplingRun run;
    run.min_slack = 0;
    double t = 0.0;
    for (;;) {
        double total = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            const double down_f = p.lambda[j] * static_cast<double>(f[j]) * static_cast<double>(z);
            const double down_x = lam * static_cast<double>(X[j]) * static_cast<double>(X[j]);
            weight[j] = std::max(up_x, p.eta[j] * static_cast<double>(model.C[j] - f[j])) + std::max(down_f, down_x);
            total += weight[j];
        }
        t += rng.exponential(total);
        if (t > horizon) break;
        double u = rng.uniform() * total;
        std::size_t j = 0;
        for (; j + 1 < J; ++j) {
            if (u < weight[j]) break;
            u -= weight[j];
        }
        const double up_f = p.eta[j] * static_cast<double>(model.C[j] - f[j]);
        const double down_f = p.lambda[j] * static_cast<double>(f[j]) * static_cast<double>(z);
        const double down_x = lam * static_cast<double>(X[j]) * static_cast<double>(X[j]);
        const double up_max = std::max(up_x, up_f);
        if (u < up_max) {
            if (u < up_x) ++X[j];
            if (u < up_f) {
                ++f[j];
                ++z;
            }
        } else {
            const double v = u - up_max;
            if (v < down_x) --X[j];
            if (v < down_f) {
                --f[j];
                --z;
            }
        }
        ++run.events;
        const Count slack = init.f[j] + X[j] - f[j];
        run.min_slack = std::min(run.min_slack, slack);
        if (slack < 0) run.dominated = false;
    }
    run.end_time = std::min(t, horizon);
    return run;
}

}  // namespace pairlim
