#include "pairlim/ssa.hpp"

#include "pairlim/error.hpp"
#include "pairlim/parallel.hpp"
#include "pairlim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pairlim {

std::vector<double> uniform_grid(double horizon, std::size_t points) {
    if (points < 2) return {0.0};
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = horizon * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    grid.back() = horizon;
    return grid;
}

std::vector<double> equal_windows(double horizon, std::size_t count) {
    return uniform_grid(horizon, count + 1);
}

std::string to_string(Timescale ts) {
    switch (ts) {
        case Timescale::Raw: return "raw";
        case Timescale::Scaled: return "scaled";
        case Timescale::Critical: return "critical";
    }
    return "unknown";
}

double to_raw_time(Timescale ts, Count N, double t) noexcept {
    switch (ts) {
        case Timescale::Raw: return t;
        case Timescale::Scaled: return t * static_cast<double>(N);
        case Timescale::Critical: return t / std::sqrt(static_cast<double>(N));
    }
    return t;
}

double from_raw_time(Timescale ts, Count N, double raw) noexcept {
    switch (ts) {
        case Timescale::Raw: return raw;
        case Timescale::Scaled: return raw / static_cast<double>(N);
        case Timescale::Critical: return raw * std::sqrt(static_cast<double>(N));
    }
    return raw;
}

Timescale default_timescale(RegimeKind regime) noexcept {
    switch (regime) {
        case RegimeKind::Dynamic: return Timescale::Scaled;
        case RegimeKind::FixedCritical: return Timescale::Critical;
        case RegimeKind::FixedOverloaded: return Timescale::Raw;
    }
    return Timescale::Raw;
}

void validate(const SimConfig& config) {
    if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
        throw Error(ErrorCode::InvalidConfig, "horizon must be positive");
    }
    if (config.max_events == 0) throw Error(ErrorCode::InvalidConfig, "max_events must be positive");
    const auto& g = config.sample_grid;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g[k] < 0.0 || g[k] > config.horizon) {
            throw Error(ErrorCode::InvalidConfig, "sample grid leaves [0, horizon]");
        }
        if (k > 0 && !(g[k] > g[k - 1])) {
            throw Error(ErrorCode::InvalidConfig, "sample grid must be strictly increasing");
        }
    }
    const auto& w = config.occupation_windows;
    if (!w.empty()) {
        if (w.size() < 2 || w.front() != 0.0 || std::abs(w.back() - config.horizon) > 1e-12 * config.horizon) {
            throw Error(ErrorCode::InvalidConfig, "occupation windows must partition [0, horizon]");
        }
        for (std::size_t k = 1; k < w.size(); ++k) {
            if (!(w[k] > w[k - 1])) throw Error(ErrorCode::InvalidConfig, "window boundaries must increase");
        }
    }
}

namespace {

class OccupationAccumulator {
public:
    OccupationAccumulator(const SimConfig& config, Count N, std::size_t types)
        : active_(!config.occupation_windows.empty()), N_(static_cast<double>(N)) {
        if (!active_) return;
        const auto& w = config.occupation_windows;
        raw_bounds_.resize(w.size());
        for (std::size_t k = 0; k < w.size(); ++k) raw_bounds_[k] = to_raw_time(config.timescale, N, w[k]);
        raw_bounds_.back() = to_raw_time(config.timescale, N, config.horizon);
        obs_per_raw_ = from_raw_time(config.timescale, N, 1.0);
        windows_.assign(w.size() - 1, WindowOccupation{0.0, std::vector<double>(types, 0.0), {}});
    }

    /// Credits the state (f, z) with the raw interval [from, to).
    void add(double from, double to, std::span<const Count> f, Count z) {
        if (!active_) return;
        while (from < to && current_ < windows_.size()) {
            const double seg_end = std::min(to, raw_bounds_[current_ + 1]);
            if (seg_end > from) {
                const double dt = (seg_end - from) * obs_per_raw_;
                auto& win = windows_[current_];
                win.duration += dt;
                for (std::size_t j = 0; j < f.size(); ++j) {
                    win.f_integral[j] += static_cast<double>(f[j]) / N_ * dt;
                }
                const auto zi = static_cast<std::size_t>(z);
                if (win.z_time.size() <= zi) win.z_time.resize(zi + 1, 0.0);
                win.z_time[zi] += dt;
            }
            if (seg_end >= raw_bounds_[current_ + 1]) {
                ++current_;
            } else {
                break;
            }
            from = seg_end;
        }
    }

    std::vector<WindowOccupation> take() { return std::move(windows_); }

private:
    bool active_;
    double N_;
    double obs_per_raw_ = 1.0;
    std::vector<double> raw_bounds_;
    std::vector<WindowOccupation> windows_;
    std::size_t current_ = 0;
};

}  // namespace

Trajectory simulate(const FiniteModel& model, const State& init, const SimConfig& config,
                    const StopRule& stop, std::uint64_t stream) {
    validate(config);
    if (auto why = state_violation(model, init); !why.empty()) {
        throw Error(ErrorCode::InvalidInit, why);
    }
    if (stop.kind == StopRule::Kind::TauA && !(stop.a > 0.0 && stop.a < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "tau threshold a must lie in (0, 1)");
    }

    Trajectory traj;
    traj.model = model;
    traj.config = config;
    traj.init = init;
    traj.stream = stream;
    traj.times.reserve(config.sample_grid.size());
    traj.states.reserve(config.sample_grid.size());

    const std::size_t J = model.types();
    const Count N = model.N;
    const double raw_horizon = to_raw_time(config.timescale, N, config.horizon);
    std::vector<double> raw_grid(config.sample_grid.size());
    for (std::size_t k = 0; k < raw_grid.size(); ++k) {
        raw_grid[k] = to_raw_time(config.timescale, N, config.sample_grid[k]);
    }

    Rng rng(config.seed, stream);
    std::vector<Count> f = init.f;
    Count z = init.z;
    Count mass = total_free(f);
    const double tau_level = stop.kind == StopRule::Kind::TauA ? stop.a * static_cast<double>(N) : -1.0;
    std::vector<double> rates(rate_slots(J));
    OccupationAccumulator occupation(config, N, J);

    std::size_t next_sample = 0;
    auto record_until = [&](double raw_limit, bool inclusive) {
        while (next_sample < raw_grid.size() &&
               (raw_grid[next_sample] < raw_limit || (inclusive && raw_grid[next_sample] <= raw_limit))) {
            traj.times.push_back(config.sample_grid[next_sample]);
            traj.states.push_back(State{f, z});
            ++next_sample;
        }
    };

    traj.max_z = z;
    double t = 0.0;
    if (static_cast<double>(mass) <= tau_level) {
        record_until(0.0, true);
        traj.stopped_at = StopInfo{StopReason::Tau, 0.0};
        traj.occupation = occupation.take();
        return traj;
    }

    for (;;) {
        fill_rates(model, f, z, rates);
        double total = 0.0;
        for (double r : rates) total += r;
        const double t_next = total > 0.0 ? t + rng.exponential(total) : std::numeric_limits<double>::infinity();

        record_until(std::min(t_next, raw_horizon), t_next > raw_horizon);
        occupation.add(t, std::min(t_next, raw_horizon), f, z);
        if (t_next > raw_horizon) break;

        double u = rng.uniform() * total;
        std::size_t slot = 0;
        for (; slot + 1 < rates.size(); ++slot) {
            if (u < rates[slot]) break;
            u -= rates[slot];
        }
        // Guard against round-off landing on a zero-rate slot.
        while (rates[slot] <= 0.0 && slot > 0) --slot;

        apply_slot(slot, J, f, z);
        if (slot < 2 * J) mass += slot < J ? -1 : 1;
        t = t_next;
        ++traj.event_count;
        traj.max_z = std::max(traj.max_z, z);
        if (config.record_events) traj.events.push_back({t, static_cast<std::uint32_t>(slot)});

        if (traj.event_count >= config.max_events) {
            traj.stopped_at = StopInfo{StopReason::MaxEvents, from_raw_time(config.timescale, N, t)};
            break;
        }
        if (static_cast<double>(mass) <= tau_level) {
            traj.stopped_at = StopInfo{StopReason::Tau, from_raw_time(config.timescale, N, t)};
            break;
        }
    }
    traj.occupation = occupation.take();
    return traj;
}

std::vector<Trajectory> replicate(const FiniteModel& model, const State& init, const SimConfig& config,
                                  const StopRule& stop, std::size_t R) {
    if (R == 0) throw Error(ErrorCode::InvalidConfig, "replication count must be at least 1");
    std::vector<Trajectory> out(R);
    parallel_for(R, [&](std::size_t i) {
        try {
            out[i] = simulate(model, init, config, stop, i);
        } catch (const Error& e) {
            throw Error(e.code(), "replicate " + std::to_string(i) + ": " + e.what());
        }
    });
    return out;
}

void require_complete(const Trajectory& traj) {
    if (traj.truncated()) {
        throw Error(ErrorCode::MaxEventsExceeded,
                    "path truncated after " + std::to_string(traj.event_count) + " events");
    }
}

LimitCurve scaled_free_particles(const Trajectory& traj, double scale) {
    LimitCurve curve;
    curve.grid = traj.times;
    curve.values.reserve(traj.states.size());
    for (const auto& s : traj.states) {
        std::vector<double> v(s.f.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = static_cast<double>(s.f[j]) / scale;
        curve.values.push_back(std::move(v));
    }
    return curve;
}

LimitCurve scaled_free_mass(const Trajectory& traj) {
    LimitCurve curve;
    curve.grid = traj.times;
    curve.values.reserve(traj.states.size());
    const auto N = static_cast<double>(traj.model.N);
    for (const auto& s : traj.states) curve.values.push_back({static_cast<double>(total_free(s)) / N});
    return curve;
}

namespace {

bool same_setup(const Trajectory& a, const Trajectory& b) {
    return a.model.params == b.model.params && a.model.N == b.model.N && a.model.C == b.model.C &&
           a.model.regime == b.model.regime && a.model.agents == b.model.agents &&
           a.config.timescale == b.config.timescale && a.config.horizon == b.config.horizon &&
           a.config.sample_grid == b.config.sample_grid;
}

}  // namespace

EmpiricalOccupation empirical_occupation(const std::vector<Trajectory>& trajs,
                                         const std::vector<double>& windows) {
    if (trajs.empty()) throw Error(ErrorCode::MismatchedReplicas, "no trajectories");
    for (const auto& tr : trajs) {
        if (!same_setup(tr, trajs.front())) {
            throw Error(ErrorCode::MismatchedReplicas, "trajectories do not share model and config");
        }
        if (tr.config.occupation_windows != windows || tr.occupation.size() + 1 != windows.size()) {
            throw Error(ErrorCode::MismatchedReplicas, "trajectory windows differ from the requested partition");
        }
    }
    const std::size_t J = trajs.front().model.types();
    const auto N = static_cast<double>(trajs.front().model.N);
    EmpiricalOccupation occ;
    occ.boundaries = windows;
    occ.replicas = trajs.size();
    occ.windows.resize(windows.size() - 1);
    for (std::size_t w = 0; w + 1 < windows.size(); ++w) {
        auto& out = occ.windows[w];
        out.begin = windows[w];
        out.end = windows[w + 1];
        out.mean_f.assign(J, 0.0);
        for (const auto& tr : trajs) {
            const auto& acc = tr.occupation[w];
            out.weight += acc.duration;
            for (std::size_t j = 0; j < J; ++j) out.mean_f[j] += acc.f_integral[j];
            if (out.z_law.size() < acc.z_time.size()) out.z_law.resize(acc.z_time.size(), 0.0);
            for (std::size_t z = 0; z < acc.z_time.size(); ++z) out.z_law[z] += acc.z_time[z];
            const bool last = w + 2 == windows.size();
            for (std::size_t k = 0; k < tr.times.size(); ++k) {
                const double t = tr.times[k];
                if (t >= out.begin && (t < out.end || (last && t <= out.end))) {
                    std::vector<double> v(J);
                    for (std::size_t j = 0; j < J; ++j) v[j] = static_cast<double>(tr.states[k].f[j]) / N;
                    out.f_samples.push_back(std::move(v));
                }
            }
        }
        if (out.weight > 0.0) {
            for (auto& m : out.mean_f) m /= out.weight;
            for (auto& p : out.z_law) p /= out.weight;
        }
    }
    return occ;
}

}  // namespace pairlim
