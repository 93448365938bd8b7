#include "pairlim/config.hpp"

#include "pairlim/curve.hpp"
#include "pairlim/error.hpp"
#include "pairlim/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pairlim {

std::string to_string(InitKind kind) {
    switch (kind) {
        case InitKind::Explicit: return "explicit";
        case InitKind::Fraction: return "fraction";
        case InitKind::Equilibrium: return "equilibrium";
    }
    return "?";
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

double scale_for(RegimeKind kind, Count N) {
    const auto n = static_cast<double>(N);
    return kind == RegimeKind::FixedCritical ? std::sqrt(n) : n;
}

}  // namespace

void validate(const ExperimentConfig& config) {
    validate(config.model);
    const std::size_t J = config.model.types();
    if (config.N_list.empty()) bad("N or N_list is required");
    for (Count N : config.N_list) {
        if (N < static_cast<Count>(J)) bad("every N must be at least the number of types");
    }
    if (config.regime.kind == RegimeKind::FixedOverloaded && !(config.regime.r > 0.0 && config.regime.r < 1.0)) {
        throw Error(ErrorCode::InvalidRegime, "overloaded regime needs 0 < r < 1");
    }
    if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) bad("horizon must be positive and finite");
    if (config.grid_points < 2) bad("grid_points must be at least 2");
    if (config.replications < 1) bad("replications must be at least 1");

    const auto& init = config.initial;
    if (init.z0 < 0) bad("initial z0 must be non-negative");
    if (init.z0 != 0 && config.regime.kind != RegimeKind::Dynamic) {
        bad("initial z0 applies to the dynamic regime only; fixed regimes derive z");
    }
    switch (init.kind) {
        case InitKind::Explicit:
            if (init.f0.size() != J) throw Error(ErrorCode::DimensionMismatch, "initial f0 needs one entry per type");
            for (double x : init.f0) {
                if (!(x >= 0.0) || !std::isfinite(x)) bad("initial f0 entries must be non-negative");
            }
            if (config.regime.kind == RegimeKind::FixedOverloaded) {
                const double mass = std::accumulate(init.f0.begin(), init.f0.end(), 0.0);
                if (std::abs(mass - (1.0 - config.regime.r)) > 1e-6) {
                    throw Error(ErrorCode::InvalidInit, "overloaded start needs sum f0 = 1 - r");
                }
            }
            break;
        case InitKind::Fraction:
            if (!(init.fraction >= 0.0 && init.fraction <= 1.0)) bad("initial fraction must lie in [0, 1]");
            if (config.regime.kind == RegimeKind::FixedOverloaded &&
                std::abs(init.fraction - (1.0 - config.regime.r)) > 1e-6) {
                throw Error(ErrorCode::InvalidInit, "overloaded start needs fraction = 1 - r");
            }
            break;
        case InitKind::Equilibrium: break;
    }

    const auto& o = config.options;
    if (!(o.burn_in >= 0.0 && o.burn_in < 1.0)) bad("burn_in must lie in [0, 1)");
    if (o.windows < 1) bad("windows must be at least 1");
    if (!(o.tolerance >= 0.0)) bad("tolerance must be non-negative");
    if (!(o.pass_fraction > 0.0 && o.pass_fraction <= 1.0)) bad("pass_fraction must lie in (0, 1]");
    if (!(o.t_star > 0.0)) bad("t_star must be positive");
    if (o.K < 0 || !(o.load >= 0.0)) bad("K and load must be non-negative");
    if (!(o.a > 0.0 && o.a < 1.0)) bad("a must lie in (0, 1)");
    if (o.z_cap && *o.z_cap < 0) bad("z_cap must be non-negative");
    if (!std::isfinite(o.limit_shift)) bad("limit_shift must be finite");
    if (o.max_states < 1) bad("max_states must be positive");
}

std::vector<double> initial_scaled(const ExperimentConfig& config) {
    const auto& p = config.model;
    const auto& init = config.initial;
    switch (init.kind) {
        case InitKind::Explicit: return init.f0;
        case InitKind::Fraction: {
            std::vector<double> f(p.types());
            for (std::size_t j = 0; j < f.size(); ++j) f[j] = init.fraction * p.c[j];
            return f;
        }
        case InitKind::Equilibrium: break;
    }
    switch (config.regime.kind) {
        case RegimeKind::Dynamic: {
            const auto hinf = h_infinity(p);
            if (hinf.degenerate) return p.c;
            return collapse_point(p, hinf.value);
        }
        case RegimeKind::FixedOverloaded: return overloaded_equilibrium(p, config.regime.r);
        case RegimeKind::FixedCritical: return critical_equilibrium(p);
    }
    return {};
}

FiniteModel finite_model(const ExperimentConfig& config, Count N) { return build_finite(config.model, N, config.regime); }

State initial_state(const ExperimentConfig& config, const FiniteModel& model) {
    const auto f0 = initial_scaled(config);
    const std::size_t J = model.types();
    const double scale = scale_for(model.regime, model.N);
    std::vector<Count> F(J);
    if (model.regime != RegimeKind::FixedOverloaded) {
        for (std::size_t j = 0; j < J; ++j) F[j] = std::clamp<Count>(std::llround(f0[j] * scale), 0, model.C[j]);
        return make_state(model, F, config.initial.z0);
    }
    // Overloaded: hit the total N - C_Z exactly, so that z(0) = 0.
    const Count target = model.N - model.agents;
    std::vector<double> rem(J);
    Count sum = 0;
    for (std::size_t j = 0; j < J; ++j) {
        const double x = f0[j] * scale;
        F[j] = std::clamp<Count>(static_cast<Count>(std::floor(x)), 0, model.C[j]);
        rem[j] = x - std::floor(x);
        sum += F[j];
    }
    std::vector<std::size_t> order(J);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    while (sum < target) {
        bool moved = false;
        for (std::size_t j : order) {
            if (sum == target) break;
            if (F[j] < model.C[j]) {
                ++F[j];
                ++sum;
                moved = true;
            }
        }
        if (!moved) break;
    }
    while (sum > target) {
        bool moved = false;
        for (auto it = order.rbegin(); it != order.rend() && sum > target; ++it) {
            if (F[*it] > 0) {
                --F[*it];
                --sum;
                moved = true;
            }
        }
        if (!moved) break;
    }
    return make_state(model, F);
}

SimConfig sim_config(const ExperimentConfig& config) {
    SimConfig sim;
    sim.horizon = config.horizon;
    sim.timescale = config.effective_timescale();
    sim.sample_grid = uniform_grid(config.horizon, config.grid_points);
    sim.seed = config.seed;
    return sim;
}

}  // namespace pairlim
