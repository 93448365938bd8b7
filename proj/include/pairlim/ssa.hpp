#pragma once

#include "pairlim/curve.hpp"
#include "pairlim/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pairlim {

/// Clock in which a trajectory is observed. Raw is the chain's own time,
/// Scaled observes t -> X(N t), Critical observes t -> X(t / sqrt(N)).
enum class Timescale { Raw, Scaled, Critical };

std::string to_string(Timescale ts);
/// Raw time corresponding to observation time `t`.
double to_raw_time(Timescale ts, Count N, double t) noexcept;
double from_raw_time(Timescale ts, Count N, double raw) noexcept;
/// Natural observation clock of a regime.
Timescale default_timescale(RegimeKind regime) noexcept;

inline constexpr std::uint64_t kDefaultMaxEvents = 1'000'000'000ULL;

struct SimConfig {
    double horizon = 1.0;
    Timescale timescale = Timescale::Raw;
    std::vector<double> sample_grid;
    std::uint64_t seed = 0;
    std::uint64_t max_events = kDefaultMaxEvents;
    /// Window boundaries 0 = w_0 < ... < w_K = horizon for sojourn accumulation;
    /// empty disables it.
    std::vector<double> occupation_windows;
    /// Keep every event (time, slot); debugging and exactness checks only.
    bool record_events = false;
};

/// Throws InvalidConfig when the config is unusable.
void validate(const SimConfig& config);

struct StopRule {
    enum class Kind { None, TauA };
    Kind kind = Kind::None;
    double a = 0.0;

    static StopRule none() { return {}; }
    /// Stop at the first time the free mass is at most a N.
    static StopRule tau(double a) { return {Kind::TauA, a}; }
};

enum class StopReason { Tau, MaxEvents };

struct StopInfo {
    StopReason reason = StopReason::Tau;
    double time = 0.0;  // observation time
};

/// Sojourn-time accumulators of one window, in observation time units.
struct WindowOccupation {
    double duration = 0.0;
    std::vector<double> f_integral;  // integral of F_j / N
    std::vector<double> z_time;      // z_time[z] = time spent with z free agents
};

struct EventRecord {
    double raw_time = 0.0;
    std::uint32_t slot = 0;
};

struct Trajectory {
    FiniteModel model;
    SimConfig config;
    State init;
    std::uint64_t stream = 0;
    std::vector<double> times;
    std::vector<State> states;
    std::uint64_t event_count = 0;
    std::optional<StopInfo> stopped_at;
    /// Largest free-agent count seen before the stop or the horizon.
    Count max_z = 0;
    std::vector<WindowOccupation> occupation;
    std::vector<EventRecord> events;

    [[nodiscard]] bool truncated() const noexcept {
        return stopped_at && stopped_at->reason == StopReason::MaxEvents;
    }
};

/// Exact (direct-method) sample path of the pairing chain. Hitting the event
/// cap does not throw: the path is truncated and flagged in `stopped_at`.
Trajectory simulate(const FiniteModel& model, const State& init, const SimConfig& config,
                    const StopRule& stop = StopRule::none(), std::uint64_t stream = 0);

/// R independent paths; replicate i uses stream i of config.seed.
std::vector<Trajectory> replicate(const FiniteModel& model, const State& init, const SimConfig& config,
                                  const StopRule& stop, std::size_t R);

/// Throws MaxEventsExceeded if the path was truncated by the event cap.
void require_complete(const Trajectory& traj);

/// Grid series of sum_j f_j / N.
LimitCurve scaled_free_mass(const Trajectory& traj);
/// Grid series of f_j / scale, one column per type.
LimitCurve scaled_free_particles(const Trajectory& traj, double scale);

struct OccupationWindow {
    double begin = 0.0;
    double end = 0.0;
    std::vector<double> mean_f;                  // time-averaged F / N
    std::vector<double> z_law;                   // sojourn-weighted law of z
    std::vector<std::vector<double>> f_samples;  // grid samples of F / N inside the window
    double weight = 0.0;                         // total observed time over replicas
};

/// Empirical counterpart of the occupation measure of (F / N, Z).
struct EmpiricalOccupation {
    std::vector<double> boundaries;
    std::vector<OccupationWindow> windows;
    std::size_t replicas = 0;
};

EmpiricalOccupation empirical_occupation(const std::vector<Trajectory>& trajs,
                                         const std::vector<double>& windows);

/// `count` equal windows on [0, horizon], as boundaries.
std::vector<double> equal_windows(double horizon, std::size_t count);

}  // namespace pairlim
