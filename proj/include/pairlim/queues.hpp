#pragma once

#include "pairlim/model.hpp"

#include <cstdint>
#include <vector>

namespace pairlim {

enum class QueueKind { MM1, MMInf };

std::string to_string(QueueKind kind);

/// MM1: z -> z+1 at gamma, z -> z-1 at mu 1{z >= 1}.
/// MMInf: z -> z+1 at gamma, z -> z-1 at mu z.
struct BirthDeathSpec {
    QueueKind kind = QueueKind::MM1;
    double gamma = 0.0;
    double mu = 1.0;
    Count init = 0;
};

void validate(const BirthDeathSpec& spec);

inline double bd_up_rate(const BirthDeathSpec& s, Count z) noexcept { return z >= 0 ? s.gamma : 0.0; }
inline double bd_down_rate(const BirthDeathSpec& s, Count z) noexcept {
    if (z <= 0) return 0.0;
    return s.kind == QueueKind::MM1 ? s.mu : s.mu * static_cast<double>(z);
}

/// Jump path: states[k] holds on [times[k], times[k+1]), the last one up to horizon.
struct BdPath {
    std::vector<double> times;
    std::vector<Count> states;
    double horizon = 0.0;
    bool truncated = false;
};

BdPath bd_simulate(const BirthDeathSpec& spec, double horizon, std::uint64_t seed, std::uint64_t stream = 0,
                   std::uint64_t max_events = 1'000'000'000ULL);

/// Time-average law of the path over [0, horizon] (index = queue length).
std::vector<double> occupancy_law(const BdPath& path);

/// Path value at time t (last-value interpolation).
Count bd_value_at(const BdPath& path, double t);

struct HittingTime {
    double time = 0.0;
    std::uint64_t events = 0;
    /// False when the event cap was reached before the level.
    bool converged = true;
};

/// First time the queue reaches K from spec.init (0 when K <= init).
HittingTime hitting_time(const BirthDeathSpec& spec, Count K, std::uint64_t seed, std::uint64_t stream = 0,
                         std::uint64_t max_events = 1'000'000'000ULL);

/// (gamma/mu)^K for MM1, (gamma/mu)^K / (K-1)! for MMInf.
double hitting_scale(const BirthDeathSpec& spec, Count K);

/// R scaled hitting samples, sample i on stream i. UnstableMM1 when an MM1
/// has gamma >= mu; Nonconvergence when a replicate hits the event cap.
std::vector<double> scaled_hitting_law(const BirthDeathSpec& spec, Count K, std::size_t R, std::uint64_t seed);

/// E L(t) for the MMInf queue.
double mminf_mean(const BirthDeathSpec& spec, double t);

// Pathwise dominance couplings. Each one runs the pairing chain and its
// dominating queue(s) in raw time with a shared event stream: the current
// maximal rates of both processes are uniformized together and one uniform
// decides which of the two moves.

struct CouplingRun {
    bool dominated = true;
    std::uint64_t events = 0;
    /// Smallest (bound - process) seen along the path.
    Count min_slack = 0;
    /// Raw time at which the run ended (horizon or a stopping time).
    double end_time = 0.0;
};

struct DominanceSummary {
    std::size_t paths = 0;
    std::size_t violations = 0;
    Count min_slack = 0;
    std::uint64_t events = 0;
};

/// Overloaded regime: Z^r(t) <= L(t) where L is an MMInf queue with input
/// `input` and per-customer service `service` in raw time, L(0) = z(0).
/// The lemma's queue is input eta_max N, service lambda_min r N / 2.
struct QueueRates {
    double input = 0.0;
    double service = 0.0;
};
QueueRates lemcl1_rates(const FiniteModel& model);
CouplingRun coupled_lemcl1(const FiniteModel& model, const State& init, const QueueRates& rates, double horizon,
                           std::uint64_t seed, std::uint64_t stream = 0);

/// Dynamic regime: Z(t) <= L_0(t) in raw time until the free mass drops to a N.
/// Default rates: input 2 eta_max N, per-customer service delta + a lambda_min N.
QueueRates lem1op_rates(const FiniteModel& model, double a);
CouplingRun coupled_lem1op(const FiniteModel& model, const State& init, double a, const QueueRates& rates,
                           double horizon, std::uint64_t seed, std::uint64_t stream = 0);

/// Critical regime: F_j(t) <= F_j(0) + X_j(t) for every j, with X_j a birth-death
/// process of birth rate eta_max N and death rate lambda_min X_j^2, X_j(0) = 0.
CouplingRun coupled_propcoup(const FiniteModel& model, const State& init, double horizon, std::uint64_t seed,
                             std::uint64_t stream = 0);

}  // namespace pairlim
