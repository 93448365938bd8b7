#pragma once

#include "pairlim/model.hpp"
#include "pairlim/ssa.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pairlim {

inline constexpr const char* kToolName = "pairlim";
inline constexpr const char* kToolVersion = "0.1.0";

enum class InitKind { Explicit, Fraction, Equilibrium };
std::string to_string(InitKind kind);

/// Initial condition in scaled units: f0 is F(0) / N in the dynamic and
/// overloaded regimes and F(0) / sqrt(N) in the critical one. `fraction`
/// means f0 = fraction * c. `equilibrium` picks the regime's fixed point.
struct InitialSpec {
    InitKind kind = InitKind::Equilibrium;
    std::vector<double> f0;
    double fraction = 0.0;
    /// Free agents at time 0 (dynamic regime only).
    Count z0 = 0;

    bool operator==(const InitialSpec&) const = default;
};

/// Knobs of the individual verification pipelines. Zero means "the claim's default".
struct ClaimOptions {
    double burn_in = 0.1;
    std::size_t windows = 20;
    double tolerance = 0.0;
    /// Share of replications that must meet a pathwise tolerance.
    double pass_fraction = 0.9;
    double t_star = 1.0;
    /// Target level and load gamma/mu of the queue claims.
    Count K = 0;
    double load = 0.0;
    /// Free-mass level of the dynamic-regime coupling.
    double a = 0.2;
    std::optional<Count> z_cap;
    /// Constant added to the limit curve; used for negative controls.
    double limit_shift = 0.0;
    /// Largest state space visited by the detailed-balance family.
    std::size_t max_states = 10'000;

    bool operator==(const ClaimOptions&) const = default;
};

struct ExperimentConfig {
    ModelParams model;
    RegimeRequest regime;
    std::vector<Count> N_list;
    InitialSpec initial;
    double horizon = 1.0;
    std::size_t grid_points = 101;
    /// Observation timescale; unset means the regime's default.
    std::optional<Timescale> timescale;
    std::size_t replications = 1;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    ClaimOptions options;

    [[nodiscard]] Count N() const { return N_list.front(); }
    [[nodiscard]] Timescale effective_timescale() const {
        return timescale.value_or(default_timescale(regime.kind));
    }
    bool operator==(const ExperimentConfig&) const = default;
};

/// ConfigError (or the model-core code) when the config cannot be run.
void validate(const ExperimentConfig& config);

/// Scaled initial point f0 for the config's regime (see InitialSpec).
std::vector<double> initial_scaled(const ExperimentConfig& config);

/// Integer initial state for size N. Counts are rounded from f0 and clamped to
/// [0, C_j]; in the overloaded regime they are apportioned so that z(0) = 0.
State initial_state(const ExperimentConfig& config, const FiniteModel& model);

FiniteModel finite_model(const ExperimentConfig& config, Count N);

/// SimConfig with the config's horizon, timescale, uniform grid and seed.
SimConfig sim_config(const ExperimentConfig& config);

}  // namespace pairlim
