#pragma once

#include "pairlim/config.hpp"
#include "pairlim/verify.hpp"

#include <string>
#include <vector>

namespace pairlim {

/// Names accepted by run_claim, in the order the desk suite runs them.
const std::vector<std::string>& claim_names();
bool is_claim(const std::string& name);

/// Runs one verification pipeline on config.N(). ConfigError for an unknown
/// claim or a config the claim cannot use (wrong regime, too few N values).
VerdictReport run_claim(const std::string& claim, const ExperimentConfig& config);

/// Claims with a scalar statistic that should shrink as N grows.
bool is_sweepable(const std::string& claim);
/// The statistic a sweep tracks for `claim` at size N.
double claim_statistic(const std::string& claim, const ExperimentConfig& config, Count N);
/// convergence_table over config.N_list.
VerdictReport run_sweep(const std::string& claim, const ExperimentConfig& config);

struct SuiteCase {
    std::string label;
    std::string claim;
    ExperimentConfig config;
};
/// Desk-scale runs of every claim with the canonical parameters.
std::vector<SuiteCase> desk_suite();

}  // namespace pairlim
