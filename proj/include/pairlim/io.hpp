#pragma once

#include "pairlim/config.hpp"
#include "pairlim/curve.hpp"
#include "pairlim/ssa.hpp"
#include "pairlim/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pairlim {

// Experiment configs are JSON documents. Unknown keys are rejected.
//
// {
//   "model":    {"c": [..], "lambda": [..], "eta": [..], "beta": 1, "delta": 2},
//   "regime":   {"kind": "dynamic" | "overloaded" | "critical", "r": 0.4},
//   "N": 2000,                       or "N_list": [250, 1000, 4000]
//   "initial":  {"kind": "explicit", "f0": [..], "z0": 0}
//             | {"kind": "fraction", "value": 0.5} | {"kind": "equilibrium"},
//   "horizon": 3, "grid_points": 301, "timescale": "raw" | "scaled" | "critical",
//   "replications": 20, "seed": 1, "output_dir": "out",
//   "options":  {"burn_in", "windows", "tolerance", "pass_fraction", "t_star",
//                "K", "load", "a", "z_cap", "limit_shift", "max_states"}
// }
//
// Only "model", "regime" and "N" / "N_list" are required.

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical serialization (sorted keys, two-space indent, trailing newline).
std::string dump_config(const ExperimentConfig& config);

/// SHA-1 of the canonical text framed as a git blob ("blob <len>\0<text>").
/// output_dir is blanked first, so the hash names the experiment, not where it was written.
std::string config_hash(const ExperimentConfig& config);

/// "# pairlim <version> config_hash=<hash> seed=<seed>"
std::string header_line(const std::string& hash, std::uint64_t seed);

/// Reals with 17 significant digits.
std::string format_real(double x);

/// CSV: header line, column line, then one row per grid time: time, f_1..f_J, z.
std::string trajectory_csv(const Trajectory& traj, const std::string& header);
/// CSV: header line, "time,<names...>", one row per grid point.
std::string curve_csv(const LimitCurve& curve, const std::vector<std::string>& names, const std::string& header);
/// CSV of a report's table (convergence sweeps).
std::string table_csv(const VerdictReport& report, const std::string& header);

/// JSON with a leading "header" member carrying the same tag as CSV headers.
std::string report_json(const VerdictReport& report, const std::string& header);
/// Structured error record for failed runs.
std::string error_json(const std::string& code, const std::string& message, const std::string& header);

struct ManifestEntry {
    std::string path;
    std::string kind;
};
std::string manifest_json(const std::string& command, const ExperimentConfig& config,
                          const std::vector<ManifestEntry>& files);

/// Writes `text` to `path`, creating parent directories. IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pairlim
