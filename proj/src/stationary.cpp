#include "pairlim/stationary.hpp"

#include "pairlim/error.hpp"
#include "pairlim/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pairlim {

namespace {

/// n log x with 0 log 0 = 0.
long double xlogy(Count n, double x) {
    if (n == 0) return 0.0L;
    return static_cast<long double>(n) * std::log(static_cast<long double>(x));
}

long double log_factorial(Count n) { return std::lgamma(static_cast<long double>(n) + 1.0L); }

void require_supported(const FiniteModel& model) {
    if (model.regime == RegimeKind::FixedOverloaded) {
        throw Error(ErrorCode::UnsupportedRegime, "no closed-form stationary law for the overloaded regime");
    }
}

long double log_sum_exp(const std::vector<long double>& v) {
    const long double m = *std::max_element(v.begin(), v.end());
    long double s = 0.0L;
    for (long double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

/// Extended precision: log weights reach ~1e4 at C ~ 2000, where double
/// rounding alone exceeds the 1e-12 detailed-balance tolerance.
long double log_weight_ext(const FiniteModel& model, const State& s) {
    const auto& p = model.params;
    const std::size_t J = model.types();
    long double lw = 0.0L;
    if (model.regime == RegimeKind::Dynamic) {
        const auto fp = crn_fixed_point(model);
        lw += xlogy(s.z, fp.w) - log_factorial(s.z);
        for (std::size_t j = 0; j < J; ++j) {
            const Count f = s.f[j];
            const Count g = model.C[j] - f;
            lw += xlogy(f, fp.u[j]) - log_factorial(f);
            lw += xlogy(g, fp.v[j]) - log_factorial(g);
        }
    } else {
        lw -= log_factorial(total_free(s));
        for (std::size_t j = 0; j < J; ++j) {
            const Count x = s.f[j];
            lw += xlogy(x, p.rho(j)) + log_factorial(model.C[j]) - log_factorial(model.C[j] - x) - log_factorial(x);
        }
    }
    return lw;
}

}  // namespace

double stationary_weight(const FiniteModel& model, const State& s) {
    require_supported(model);
    require_valid(model, s);
    return static_cast<double>(log_weight_ext(model, s));
}

Count default_z_cap(const ModelParams& params) {
    return std::max<Count>(30, static_cast<Count>(std::ceil(10.0 * params.rho0())));
}

StateIndex::StateIndex(const FiniteModel& model, Count z_cap) : model_(model), z_cap_(z_cap) {
    require_supported(model);
    const bool dynamic = model.regime == RegimeKind::Dynamic;
    if (!dynamic) z_cap_ = 0;
    if (dynamic && z_cap < 0) throw Error(ErrorCode::InvalidConfig, "z_cap must be non-negative");
    double total = 1.0;
    std::size_t stride = 1;
    for (Count c : model.C) {
        stride_.push_back(stride);
        total *= static_cast<double>(c + 1);
        stride *= static_cast<std::size_t>(c + 1);
        if (total > static_cast<double>(kMaxEnumeratedStates)) break;
    }
    if (dynamic) {
        stride_.push_back(stride);
        total *= static_cast<double>(z_cap_ + 1);
        stride *= static_cast<std::size_t>(z_cap_ + 1);
    }
    if (total > static_cast<double>(kMaxEnumeratedStates)) {
        throw Error(ErrorCode::SpaceTooLarge, "state space exceeds 1e7 states");
    }
    size_ = stride;
}

bool StateIndex::contains(const State& s) const noexcept {
    if (s.f.size() != model_.types()) return false;
    for (std::size_t j = 0; j < s.f.size(); ++j) {
        if (s.f[j] < 0 || s.f[j] > model_.C[j]) return false;
    }
    if (model_.regime == RegimeKind::Dynamic) return s.z >= 0 && s.z <= z_cap_;
    return s.z == fixed_regime_agents(model_, s.f);
}

std::size_t StateIndex::index(const State& s) const {
    if (!contains(s)) throw Error(ErrorCode::InvalidState, "state outside the enumerated space");
    std::size_t i = 0;
    for (std::size_t j = 0; j < s.f.size(); ++j) i += stride_[j] * static_cast<std::size_t>(s.f[j]);
    if (model_.regime == RegimeKind::Dynamic) i += stride_.back() * static_cast<std::size_t>(s.z);
    return i;
}

State StateIndex::state(std::size_t i) const {
    State s;
    s.f.resize(model_.types());
    for (std::size_t j = 0; j < s.f.size(); ++j) {
        const auto radix = static_cast<std::size_t>(model_.C[j] + 1);
        s.f[j] = static_cast<Count>(i % radix);
        i /= radix;
    }
    s.z = model_.regime == RegimeKind::Dynamic ? static_cast<Count>(i) : fixed_regime_agents(model_, s.f);
    return s;
}

double StationaryTable::prob(std::size_t i) const { return static_cast<double>(std::exp(log_weights[i] - log_norm)); }

std::vector<double> StationaryTable::probabilities() const {
    std::vector<double> p(size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = prob(i);
    return p;
}

StationaryTable enumerate_Z(const FiniteModel& model, std::optional<Count> z_cap) {
    require_supported(model);
    StationaryTable table;
    table.model = model;
    table.z_cap = model.regime == RegimeKind::Dynamic ? z_cap.value_or(default_z_cap(model.params)) : 0;
    const StateIndex idx(model, table.z_cap);
    std::vector<long double> ext(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const State s = idx.state(i);
        require_valid(model, s);
        ext[i] = log_weight_ext(model, s);
    }
    const long double shift = *std::max_element(ext.begin(), ext.end());
    if (!std::isfinite(shift)) throw Error(ErrorCode::ConsistencyCheckFailed, "all stationary weights vanish");
    table.log_weights.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) table.log_weights[i] = ext[i] - shift;
    table.log_norm = log_sum_exp(table.log_weights);
    table.log_Z = static_cast<double>(shift + table.log_norm);
    return table;
}

namespace {

void require_same_space(const FiniteModel& a, const FiniteModel& b) {
    if (a.N != b.N || a.C != b.C || a.regime != b.regime || a.agents != b.agents) {
        throw Error(ErrorCode::DimensionMismatch, "rate model and table describe different state spaces");
    }
}

}  // namespace

double check_detailed_balance(const FiniteModel& model) {
    return check_detailed_balance(model, enumerate_Z(model));
}

double check_detailed_balance(const FiniteModel& rates_model, const StationaryTable& table) {
    require_same_space(rates_model, table.model);
    const StateIndex idx = table.index();
    const std::size_t J = rates_model.types();
    std::vector<double> rates(rate_slots(J));
    std::vector<double> back(rate_slots(J));
    double worst = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const State x = idx.state(i);
        fill_rates(rates_model, x.f, x.z, rates);
        // Each adjacent pair is visited once, from the endpoint with fewer free
        // particles (Split) or fewer agents (Birth).
        for (std::size_t slot = J; slot < rates.size(); ++slot) {
            if (slot == 2 * J + 1 || rates[slot] <= 0.0) continue;
            State y = x;
            apply_slot(slot, J, y.f, y.z);
            if (!idx.contains(y)) continue;
            fill_rates(rates_model, y.f, y.z, back);
            const std::size_t reverse = slot < 2 * J ? slot - J : 2 * J + 1;
            const long double la = table.log_weights[i] + std::log(static_cast<long double>(rates[slot]));
            const long double lb = table.log_weights[idx.index(y)] + std::log(static_cast<long double>(back[reverse]));
            if (!std::isfinite(la) && !std::isfinite(lb)) continue;
            worst = std::max(worst, static_cast<double>(std::abs(std::expm1(lb - la))));
        }
    }
    return worst;
}

GlobalBalance global_balance_residual(const FiniteModel& model, const StationaryTable& table) {
    require_same_space(model, table.model);
    const StateIndex idx = table.index();
    const std::size_t J = model.types();
    const auto pi = table.probabilities();
    std::vector<double> inflow(idx.size(), 0.0);
    std::vector<double> outflow(idx.size(), 0.0);
    std::vector<double> rates(rate_slots(J));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const State x = idx.state(i);
        fill_rates(model, x.f, x.z, rates);
        for (std::size_t slot = 0; slot < rates.size(); ++slot) {
            if (rates[slot] <= 0.0) continue;
            const double flow = pi[i] * rates[slot];
            outflow[i] += flow;
            State y = x;
            apply_slot(slot, J, y.f, y.z);
            if (idx.contains(y)) inflow[idx.index(y)] += flow;
        }
    }
    GlobalBalance out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.max_residual = std::max(out.max_residual, std::abs(inflow[i] - outflow[i]));
        if (model.regime == RegimeKind::Dynamic && idx.state(i).z == table.z_cap) out.boundary_mass += pi[i];
    }
    out.truncation_flagged = out.boundary_mass > 1e-10;
    return out;
}

std::vector<double> total_free_law(const StationaryTable& table) {
    const StateIndex idx = table.index();
    std::vector<double> law(static_cast<std::size_t>(table.model.N) + 1, 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        law[static_cast<std::size_t>(total_free(idx.state(i)))] += table.prob(i);
    }
    return law;
}

double mean_total_free(const StationaryTable& table) {
    const auto law = total_free_law(table);
    double m = 0.0;
    for (std::size_t k = 0; k < law.size(); ++k) m += static_cast<double>(k) * law[k];
    return m;
}

EmpiricalStateLaw empirical_state_law(const Trajectory& traj, const StationaryTable& table) {
    if (!traj.config.record_events) {
        throw Error(ErrorCode::InvalidConfig, "state law replay needs a trajectory with record_events");
    }
    require_same_space(traj.model, table.model);
    const StateIndex idx = table.index();
    const std::size_t J = traj.model.types();
    EmpiricalStateLaw out;
    out.law.assign(idx.size(), 0.0);
    State s = traj.init;
    double t = 0.0;
    auto credit = [&](double dt) {
        if (idx.contains(s)) {
            out.law[idx.index(s)] += dt;
        } else {
            out.outside += dt;
        }
    };
    for (const auto& ev : traj.events) {
        credit(ev.raw_time - t);
        t = ev.raw_time;
        apply_slot(ev.slot, J, s.f, s.z);
    }
    double end = to_raw_time(traj.config.timescale, traj.model.N, traj.config.horizon);
    if (traj.stopped_at) end = to_raw_time(traj.config.timescale, traj.model.N, traj.stopped_at->time);
    if (end > t) credit(end - t);
    double total = out.outside;
    for (double x : out.law) total += x;
    if (total > 0.0) {
        for (auto& x : out.law) x /= total;
        out.outside /= total;
    }
    return out;
}

}  // namespace pairlim
