#include "pairlim/model.hpp"

#include "pairlim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pairlim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyModel: return "EmptyModel";
        case ErrorCode::NonPositiveRate: return "NonPositiveRate";
        case ErrorCode::ProportionsDoNotSumToOne: return "ProportionsDoNotSumToOne";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NTooSmall: return "NTooSmall";
        case ErrorCode::InvalidRegime: return "InvalidRegime";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidInit: return "InvalidInit";
        case ErrorCode::MaxEventsExceeded: return "MaxEventsExceeded";
        case ErrorCode::MismatchedReplicas: return "MismatchedReplicas";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::SolverStall: return "SolverStall";
        case ErrorCode::InitMassMismatch: return "InitMassMismatch";
        case ErrorCode::NegativeVariance: return "NegativeVariance";
        case ErrorCode::ConsistencyCheckFailed: return "ConsistencyCheckFailed";
        case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
        case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
        case ErrorCode::Nonconvergence: return "Nonconvergence";
        case ErrorCode::UnstableMM1: return "UnstableMM1";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

std::vector<double> ModelParams::rho() const {
    std::vector<double> out(types());
    for (std::size_t j = 0; j < types(); ++j) out[j] = rho(j);
    return out;
}

ModelParams validate(const ModelParams& params) {
    const std::size_t J = params.types();
    if (J == 0) throw Error(ErrorCode::EmptyModel, "model has no particle types");
    if (params.lambda.size() != J || params.eta.size() != J) {
        throw Error(ErrorCode::DimensionMismatch, "c, lambda and eta must have the same length");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        if (!(params.c[j] > 0.0) || !std::isfinite(params.c[j])) {
            throw Error(ErrorCode::ProportionsDoNotSumToOne,
                        "proportion c[" + std::to_string(j) + "] must be positive");
        }
        sum += params.c[j];
        if (!(params.lambda[j] > 0.0) || !std::isfinite(params.lambda[j])) {
            throw Error(ErrorCode::NonPositiveRate, "lambda[" + std::to_string(j) + "] must be positive");
        }
        if (!(params.eta[j] > 0.0) || !std::isfinite(params.eta[j])) {
            throw Error(ErrorCode::NonPositiveRate, "eta[" + std::to_string(j) + "] must be positive");
        }
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::ProportionsDoNotSumToOne, "proportions sum to " + std::to_string(sum));
    }
    if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) {
        throw Error(ErrorCode::NonPositiveRate, "beta must be non-negative");
    }
    if (!(params.delta > 0.0) || !std::isfinite(params.delta)) {
        throw Error(ErrorCode::NonPositiveRate, "delta must be positive");
    }
    return params;
}

std::string to_string(RegimeKind kind) {
    switch (kind) {
        case RegimeKind::Dynamic: return "dynamic";
        case RegimeKind::FixedOverloaded: return "overloaded";
        case RegimeKind::FixedCritical: return "critical";
    }
    return "unknown";
}

std::vector<Count> apportion(std::span<const double> share, Count total) {
    const double weight = std::accumulate(share.begin(), share.end(), 0.0);
    std::vector<Count> out(share.size(), 0);
    if (share.empty() || total <= 0 || weight <= 0.0) return out;
    std::vector<double> remainder(share.size());
    Count assigned = 0;
    for (std::size_t j = 0; j < share.size(); ++j) {
        const double quota = share[j] / weight * static_cast<double>(total);
        out[j] = static_cast<Count>(std::floor(quota));
        remainder[j] = quota - static_cast<double>(out[j]);
        assigned += out[j];
    }
    std::vector<std::size_t> order(share.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
        ++out[order[k]];
        ++assigned;
    }
    while (assigned > total) {  // floating slack can overshoot by one unit
        auto it = std::max_element(out.begin(), out.end());
        --*it;
        --assigned;
    }
    return out;
}

FiniteModel build_finite(const ModelParams& params, Count N, const RegimeRequest& regime) {
    FiniteModel model;
    model.params = validate(params);
    const std::size_t J = params.types();
    if (N < static_cast<Count>(J)) {
        throw Error(ErrorCode::NTooSmall, "N = " + std::to_string(N) + " is smaller than J");
    }
    model.N = N;
    model.C = apportion(params.c, N);
    for (std::size_t j = 0; j < J; ++j) {
        if (model.C[j] == 0) {
            throw Error(ErrorCode::NTooSmall, "type " + std::to_string(j) + " receives no particles");
        }
    }
    model.regime = regime.kind;
    switch (regime.kind) {
        case RegimeKind::Dynamic:
            model.agents = 0;
            break;
        case RegimeKind::FixedCritical:
            model.agents = N;
            break;
        case RegimeKind::FixedOverloaded: {
            if (!(regime.r > 0.0 && regime.r < 1.0)) {
                throw Error(ErrorCode::InvalidRegime, "overloaded regime needs 0 < r < 1");
            }
            model.agents = std::llround(regime.r * static_cast<double>(N));
            if (model.agents <= 0 || model.agents >= N) {
                throw Error(ErrorCode::InvalidRegime,
                            "C_Z = " + std::to_string(model.agents) + " must satisfy 0 < C_Z < N");
            }
            break;
        }
    }
    return model;
}

Count total_free(std::span<const Count> f) noexcept {
    return std::accumulate(f.begin(), f.end(), Count{0});
}

Count total_free(const State& s) noexcept { return total_free(std::span<const Count>(s.f)); }

std::string state_violation(const FiniteModel& model, const State& s) {
    if (s.f.size() != model.types()) return "state has the wrong number of types";
    for (std::size_t j = 0; j < model.types(); ++j) {
        if (s.f[j] < 0 || s.f[j] > model.C[j]) {
            return "f[" + std::to_string(j) + "] = " + std::to_string(s.f[j]) + " outside [0, " +
                   std::to_string(model.C[j]) + "]";
        }
    }
    if (s.z < 0) return "negative free-agent count";
    if (model.fixed() && s.z != fixed_regime_agents(model, s.f)) {
        return "z = " + std::to_string(s.z) + " differs from C_Z + |f| - N = " +
               std::to_string(fixed_regime_agents(model, s.f));
    }
    return {};
}

void require_valid(const FiniteModel& model, const State& s) {
    if (auto why = state_violation(model, s); !why.empty()) throw Error(ErrorCode::InvalidState, why);
}

State make_state(const FiniteModel& model, std::vector<Count> f, Count z) {
    State s{std::move(f), z};
    if (model.fixed() && s.f.size() == model.types()) s.z = fixed_regime_agents(model, s.f);
    return s;
}

int Transition::delta_z() const noexcept {
    switch (kind) {
        case TransitionKind::Pair: return -1;
        case TransitionKind::Split: return 1;
        case TransitionKind::AgentBirth: return 1;
        case TransitionKind::AgentDeath: return -1;
    }
    return 0;
}

std::vector<int> Transition::delta_f(std::size_t types) const {
    std::vector<int> d(types, 0);
    if (kind == TransitionKind::Pair) d[type] = -1;
    if (kind == TransitionKind::Split) d[type] = 1;
    return d;
}

Transition transition_for_slot(std::size_t slot, std::size_t types, double rate) {
    if (slot < types) return {TransitionKind::Pair, slot, rate};
    if (slot < 2 * types) return {TransitionKind::Split, slot - types, rate};
    if (slot == 2 * types) return {TransitionKind::AgentBirth, 0, rate};
    return {TransitionKind::AgentDeath, 0, rate};
}

std::vector<Transition> enabled_transitions(const FiniteModel& model, const State& s) {
    require_valid(model, s);
    const std::size_t J = model.types();
    std::vector<double> rates(rate_slots(J));
    fill_rates(model, s.f, s.z, rates);
    std::vector<Transition> out;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        if (rates[k] > 0.0) out.push_back(transition_for_slot(k, J, rates[k]));
    }
    return out;
}

State apply(const State& s, const Transition& t) {
    State next = s;
    switch (t.kind) {
        case TransitionKind::Pair:
            --next.f[t.type];
            --next.z;
            break;
        case TransitionKind::Split:
            ++next.f[t.type];
            ++next.z;
            break;
        case TransitionKind::AgentBirth: ++next.z; break;
        case TransitionKind::AgentDeath: --next.z; break;
    }
    return next;
}

}  // namespace pairlim
