#pragma once

#include "pairlim/curve.hpp"
#include "pairlim/model.hpp"
#include "pairlim/ssa.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace pairlim {

/// Outcome of one statistical check, reproducible from its seeds.
struct VerdictReport {
    std::string claim;
    std::string statistic;
    double observed = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::vector<Count> N_values;
    std::size_t replications = 0;
    std::vector<std::uint64_t> seeds;
    /// Secondary numbers (negative controls, per-window values, ...).
    std::vector<std::pair<std::string, double>> details;
    /// Optional table (convergence sweeps): column names and rows.
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::string name, double value) { details.emplace_back(std::move(name), value); }
    [[nodiscard]] double detail(const std::string& name) const;
};

using Cdf = std::function<double(double)>;

/// sup |F_n - F| over the sample. `left` gives F(x-) for discontinuous
/// references; when empty, F is taken as continuous. EmptySample for < 2 samples.
double ks_distance(std::vector<double> samples, const Cdf& cdf, const Cdf& left = {});
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// c(alpha) sqrt((n + m) / (n m)), the asymptotic two-sample critical value.
double ks_critical_value(std::size_t n, std::size_t m, double alpha = 0.05);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);
std::vector<double> poisson_pmf(double mean, std::size_t size);
/// TV between a law on {0, ..., n-1} and Poisson(mean), counting the Poisson tail beyond n.
double tv_to_poisson(const std::vector<double>& law, double mean);
std::vector<double> geometric_pmf(double ratio, std::size_t size);
double tv_to_geometric(const std::vector<double>& law, double ratio);

/// max over the grid and coordinates of |sim - limit|. GridMismatch when the
/// grids or dimensions differ.
double path_sup_distance(const LimitCurve& sim, const LimitCurve& limit);

/// max_j |f_j - rho_j c_j / (phi(||f||) + rho_j)|
double collapse_residual(const ModelParams& params, const std::vector<double>& f);

/// Distance of the dynamic-regime paths to the collapse curve: the per-time
/// residual is averaged over replicas and the median over t > burn_in * horizon
/// is compared with max(0.03, 5 / sqrt(N)).
VerdictReport collapse_test(const std::vector<Trajectory>& trajs, const ModelParams& params,
                            double burn_in = 0.1);

/// Per window: TV between the sojourn law of z and Poisson(phi(H(mid)) + phi_offset).
/// Window midpoints must be points of H's grid. Windows starting before
/// burn_in * horizon are skipped. Pass when the mean TV is at most 0.05.
VerdictReport occupation_vs_poisson(const EmpiricalOccupation& occ, const LimitCurve& H, const ModelParams& params,
                                    double burn_in = 0.1, double phi_offset = 0.0);

/// lambda_j x_j <eta, c - x> / <lambda, x> - eta_j (c_j - x_j)
std::vector<double> drift_balance_integrand(const ModelParams& params, const std::vector<double>& x);

/// Window averages of the integrand over grid samples, relative to eta_j c_j;
/// pass when every post-burn-in value is at most 0.05 in absolute value.
VerdictReport drift_balance_test(const EmpiricalOccupation& occ, const ModelParams& params, double burn_in = 0.1);

struct CltOptions {
    /// Initial point of the critical fluid limit.
    std::vector<double> f0bar;
    std::uint64_t seed = 1;
    double ks_threshold = 0.1;
    double variance_tolerance = 0.2;
};

/// Compares N^{-1/4} (F(t/sqrt N) - sqrt N fbar(t)) from R critical-regime SSA
/// paths with R Euler-Maruyama samples of the fluctuation diffusion at t_star,
/// coordinate by coordinate. SSA samples are jittered uniformly over their
/// lattice cell (seed + 3). Also runs a diffusion-vs-diffusion null control
/// against the two-sample critical value at level 0.05 / J.
VerdictReport clt_marginal_test(const ModelParams& params, double t_star, Count N, std::size_t R,
                                const CltOptions& options);

/// Evaluates `statistic(N)` for each N. Pass when each value is at most 1.1
/// times its predecessor and, for lists spanning a factor >= 4 in N, the last
/// value is at most first * (N_first / N_last)^{1/4}.
VerdictReport convergence_table(const std::string& claim, const std::vector<Count>& N_list, std::size_t R,
                                const std::function<double(Count)>& statistic);

}  // namespace pairlim
