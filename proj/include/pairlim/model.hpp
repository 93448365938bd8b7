#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pairlim {

using Count = std::int64_t;

/// Rates and type proportions of the pairing model.
///
/// Particles of type j pair with a free agent at rate lambda[j] per pair and a
/// pair of type j splits at rate eta[j]. Agents are created at rate beta and a
/// free agent dies at rate delta.
struct ModelParams {
    std::vector<double> c;
    std::vector<double> lambda;
    std::vector<double> eta;
    double beta = 0.0;
    double delta = 1.0;

    [[nodiscard]] std::size_t types() const noexcept { return c.size(); }
    /// beta / delta
    [[nodiscard]] double rho0() const noexcept { return beta / delta; }
    /// eta_j / lambda_j
    [[nodiscard]] double rho(std::size_t j) const noexcept { return eta[j] / lambda[j]; }
    [[nodiscard]] std::vector<double> rho() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Returns `params` unchanged when every invariant holds, throws Error otherwise.
ModelParams validate(const ModelParams& params);

enum class RegimeKind { Dynamic, FixedOverloaded, FixedCritical };

std::string to_string(RegimeKind kind);

/// What the caller asks for when scaling a model; `r` is only read for the
/// overloaded regime.
struct RegimeRequest {
    RegimeKind kind = RegimeKind::Dynamic;
    double r = 0.0;

    static RegimeRequest dynamic() { return {RegimeKind::Dynamic, 0.0}; }
    static RegimeRequest overloaded(double r) { return {RegimeKind::FixedOverloaded, r}; }
    static RegimeRequest critical() { return {RegimeKind::FixedCritical, 0.0}; }

    bool operator==(const RegimeRequest&) const = default;
};

struct FiniteModel {
    ModelParams params;
    Count N = 0;
    std::vector<Count> C;
    RegimeKind regime = RegimeKind::Dynamic;
    /// Total number of agents in the fixed regimes (C_Z); N for critical, 0 for dynamic.
    Count agents = 0;

    [[nodiscard]] std::size_t types() const noexcept { return C.size(); }
    [[nodiscard]] bool fixed() const noexcept { return regime != RegimeKind::Dynamic; }
};

/// Largest-remainder apportionment of `total` units with weights `share`
/// (ties go to the lowest index).
std::vector<Count> apportion(std::span<const double> share, Count total);

FiniteModel build_finite(const ModelParams& params, Count N, const RegimeRequest& regime);

struct State {
    std::vector<Count> f;
    Count z = 0;

    friend bool operator==(const State&, const State&) = default;
};

Count total_free(const State& s) noexcept;
Count total_free(std::span<const Count> f) noexcept;

/// Free agents implied by the free particles in a fixed regime (C_Z + sum f - N).
inline Count fixed_regime_agents(const FiniteModel& model, std::span<const Count> f) noexcept {
    return model.agents + total_free(f) - model.N;
}

/// Empty string when `s` is a valid state of `model`, otherwise the reason.
std::string state_violation(const FiniteModel& model, const State& s);
void require_valid(const FiniteModel& model, const State& s);

/// State with the given free particles; z is derived in the fixed regimes.
State make_state(const FiniteModel& model, std::vector<Count> f, Count z = 0);

enum class TransitionKind { Pair, Split, AgentBirth, AgentDeath };

struct Transition {
    TransitionKind kind = TransitionKind::Pair;
    std::size_t type = 0;  // particle type for Pair/Split
    double rate = 0.0;

    [[nodiscard]] int delta_z() const noexcept;
    [[nodiscard]] std::vector<int> delta_f(std::size_t types) const;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Number of rate slots: Pair(0..J-1), Split(0..J-1), AgentBirth, AgentDeath.
inline std::size_t rate_slots(std::size_t types) noexcept { return 2 * types + 2; }

/// Q-matrix rates out of (f, z) in slot order. Birth/death slots are zero in
/// the fixed regimes. `out.size()` must equal rate_slots(J).
inline void fill_rates(const FiniteModel& model, std::span<const Count> f, Count z,
                       std::span<double> out) noexcept {
    const std::size_t J = model.types();
    const auto& p = model.params;
    const auto zd = static_cast<double>(z);
    for (std::size_t j = 0; j < J; ++j) {
        out[j] = p.lambda[j] * static_cast<double>(f[j]) * zd;
        out[J + j] = p.eta[j] * static_cast<double>(model.C[j] - f[j]);
    }
    if (model.regime == RegimeKind::Dynamic) {
        out[2 * J] = p.beta;
        out[2 * J + 1] = p.delta * zd;
    } else {
        out[2 * J] = 0.0;
        out[2 * J + 1] = 0.0;
    }
}

Transition transition_for_slot(std::size_t slot, std::size_t types, double rate);

/// Applies the move in `slot` to (f, z) in place.
inline void apply_slot(std::size_t slot, std::size_t types, std::span<Count> f, Count& z) noexcept {
    if (slot < types) {
        --f[slot];
        --z;
    } else if (slot < 2 * types) {
        ++f[slot - types];
        ++z;
    } else if (slot == 2 * types) {
        ++z;
    } else {
        --z;
    }
}

/// Transitions with positive rate out of `s`.
std::vector<Transition> enabled_transitions(const FiniteModel& model, const State& s);

State apply(const State& s, const Transition& t);

}  // namespace pairlim
