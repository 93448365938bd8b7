#pragma once

#include "pairlim/curve.hpp"
#include "pairlim/model.hpp"

#include <cstdint>
#include <vector>

namespace pairlim {

/// sum_j rho_j c_j / (rho_j + x), strictly decreasing from 1 at x = 0.
double phi_mass(const ModelParams& params, double x) noexcept;

/// Solves phi_mass(params, phi) = y for phi > 0, keeping the last root as the
/// starting point of the next solve. Not thread-safe; use one per thread.
class PhiSolver {
public:
    explicit PhiSolver(const ModelParams& params);

    double operator()(double y);

    [[nodiscard]] const ModelParams& params() const noexcept { return params_; }

private:
    ModelParams params_;
    double rho_min_;
    double rho_max_;
    double last_ = -1.0;
};

/// phi(y); DomainError unless 1e-9 < y < 1 - 1e-9.
double phi(const ModelParams& params, double y);

/// Closed-form point on the collapse curve at free mass y: rho_j c_j / (rho_j + phi(y)).
std::vector<double> collapse_point(const ModelParams& params, double y);

/// H' = delta phi(H) - beta from H(0) = f0_norm, sampled on `grid`.
/// The solution is cross-checked against the implicit integral form.
LimitCurve solve_H(const ModelParams& params, double f0_norm, const std::vector<double>& grid);

struct HInfinity {
    double value = 1.0;
    /// Set when beta = 0: the fixed point degenerates to 1.
    bool degenerate = false;
};

/// sum_j rho_j c_j / (rho_j + rho_0).
HInfinity h_infinity(const ModelParams& params);

/// f_j(t) = rho_j c_j / (rho_j + phi(H(t))) along an H curve.
LimitCurve limit_profile(const ModelParams& params, const LimitCurve& H);

/// eta_j (c_j - f_j) - lambda_j f_j <eta, c - f> / <lambda, f>
std::vector<double> overloaded_drift(const ModelParams& params, const std::vector<double>& f);

/// Fluid limit of the overloaded regime with agent fraction r; requires
/// sum f0 = 1 - r and 0 < f0_j <= c_j.
LimitCurve overloaded_ode(const ModelParams& params, double r, const std::vector<double>& f0,
                          const std::vector<double>& grid);

std::vector<double> overloaded_equilibrium(const ModelParams& params, double r);

/// c_j eta_j - lambda_j f_j ||f||
std::vector<double> critical_drift(const ModelParams& params, const std::vector<double>& f);

LimitCurve critical_ode(const ModelParams& params, const std::vector<double>& f0bar,
                        const std::vector<double>& grid);

/// c_j rho_j / sqrt(sum_k c_k rho_k)
std::vector<double> critical_equilibrium(const ModelParams& params);

struct DiffusionOptions {
    double max_step = 1e-3;
    /// Replace every Brownian increment by 0.
    bool zero_noise = false;
    /// Normals summed per increment (see clt_diffusion).
    unsigned noise_refinement = 1;
};

struct DiffusionPath {
    std::vector<double> grid;
    std::vector<std::vector<double>> values;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Euler-Maruyama path of the critical-regime fluctuation diffusion around
/// `fbar`, sampled on fbar's grid. A step of length h draws its increment as m
/// sub-increments of length h / m (m = noise_refinement), so a run with step h
/// and m = 2 consumes the same Brownian path as a run with step h / 2 and m = 1.
DiffusionPath clt_diffusion(const ModelParams& params, const LimitCurve& fbar, const std::vector<double>& fhat0,
                            std::uint64_t seed, const DiffusionOptions& options = {}, std::uint64_t stream = 0);

struct CrnFixedPoint {
    std::vector<double> u;  // free particles
    std::vector<double> v;  // paired particles
    double w = 0.0;         // free agents
};

/// Fixed point of the reaction network of the dynamic regime at finite N.
CrnFixedPoint crn_fixed_point(const FiniteModel& model);

}  // namespace pairlim
