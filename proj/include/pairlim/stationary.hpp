#pragma once

#include "pairlim/model.hpp"
#include "pairlim/ssa.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace pairlim {

inline constexpr std::size_t kMaxEnumeratedStates = 10'000'000;

/// Unnormalized log stationary weight of `s`: the product form built on the
/// reaction-network fixed point (dynamic) or the binomial-type weight of the
/// critical regime. UnsupportedRegime for the overloaded regime.
double stationary_weight(const FiniteModel& model, const State& s);

/// max(30, 10 rho_0)
Count default_z_cap(const ModelParams& params);

/// Every state of a model, indexed in mixed radix: f_0 fastest, then f_1, ...,
/// and z last (dynamic regime only, 0 <= z <= z_cap).
class StateIndex {
public:
    StateIndex(const FiniteModel& model, Count z_cap);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] std::size_t index(const State& s) const;
    [[nodiscard]] bool contains(const State& s) const noexcept;
    [[nodiscard]] State state(std::size_t i) const;
    [[nodiscard]] Count z_cap() const noexcept { return z_cap_; }

private:
    FiniteModel model_;
    Count z_cap_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 0;
};

struct StationaryTable {
    FiniteModel model;
    Count z_cap = 0;  // 0 outside the dynamic regime
    /// Log weights minus the largest one, in extended precision: tails sit ~1e4
    /// below the mode at C ~ 2000, where a double ulp is already ~2e-12.
    std::vector<long double> log_weights;
    long double log_norm = 0.0L;  // log sum_i exp(log_weights[i])
    double log_Z = 0.0;           // unnormalized total, log_norm plus the shift

    [[nodiscard]] StateIndex index() const { return StateIndex(model, z_cap); }
    [[nodiscard]] std::size_t size() const noexcept { return log_weights.size(); }
    /// Normalized probability of state number i.
    [[nodiscard]] double prob(std::size_t i) const;
    [[nodiscard]] std::vector<double> probabilities() const;
};

/// Exact log-sum-exp normalization over the (truncated) state space.
/// SpaceTooLarge above kMaxEnumeratedStates states.
StationaryTable enumerate_Z(const FiniteModel& model, std::optional<Count> z_cap = std::nullopt);

/// Largest relative gap |pi(x) q(x,y) - pi(y) q(y,x)| / pi(x) q(x,y) over
/// adjacent pairs inside the table. The overload takes the rates from
/// `rates_model`, which lets a perturbed chain be tested against the table of
/// the original one.
double check_detailed_balance(const FiniteModel& model);
double check_detailed_balance(const FiniteModel& rates_model, const StationaryTable& table);

struct GlobalBalance {
    /// max over states of |inflow - outflow| with normalized weights.
    double max_residual = 0.0;
    /// Probability of the top layer z = z_cap (0 outside the dynamic regime).
    double boundary_mass = 0.0;
    /// True when the boundary layer carries enough mass (> 1e-10) for the
    /// truncation to dominate the residual.
    bool truncation_flagged = false;
};

/// Global balance of the table's distribution under the model's Q-matrix.
/// Flows to and from states beyond z_cap are not compensated, so the residual
/// at the top layer measures the truncation.
GlobalBalance global_balance_residual(const FiniteModel& model, const StationaryTable& table);

/// Law of the total free count ||f|| under the table.
std::vector<double> total_free_law(const StationaryTable& table);
double mean_total_free(const StationaryTable& table);

/// Time-weighted law of the visited states over the table's index, replayed
/// from a trajectory simulated with record_events. States outside the table
/// are counted in the returned `outside` share.
struct EmpiricalStateLaw {
    std::vector<double> law;
    double outside = 0.0;
};
EmpiricalStateLaw empirical_state_law(const Trajectory& traj, const StationaryTable& table);

}  // namespace pairlim
