#include "pairlim/limits.hpp"

#include "pairlim/error.hpp"
#include "pairlim/rng.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pairlim {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kAbsTol = 1e-12;
constexpr double kRelTol = 1e-10;
constexpr double kPhiEdge = 1e-9;

using Vec = std::vector<double>;

void require_grid(const Vec& grid) {
    if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty time grid");
    if (grid.front() != 0.0) throw Error(ErrorCode::InvalidConfig, "time grid must start at 0");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) throw Error(ErrorCode::InvalidConfig, "time grid must increase");
    }
}

/// Integrates x' = rhs(x) on `grid` with dense-output Dormand-Prince.
template <class Rhs>
LimitCurve integrate_on_grid(Rhs rhs, Vec x0, const Vec& grid) {
    LimitCurve curve;
    curve.grid = grid;
    curve.values.reserve(grid.size());
    if (grid.size() == 1) {
        curve.values.push_back(std::move(x0));
        return curve;
    }
    auto system = [&rhs](const Vec& x, Vec& dxdt, double) { rhs(x, dxdt); };
    auto observer = [&curve](const Vec& x, double) { curve.values.push_back(x); };
    const double dt0 = std::min(1e-3, grid[1] - grid[0]);
    try {
        odeint::integrate_times(odeint::make_dense_output(kAbsTol, kRelTol, odeint::runge_kutta_dopri5<Vec>()),
                                system, x0, grid.begin(), grid.end(), dt0, observer,
                                odeint::max_step_checker(1'000'000));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::SolverStall, e.what());
    }
    for (const auto& v : curve.values) {
        for (double x : v) {
            if (!std::isfinite(x)) throw Error(ErrorCode::SolverStall, "solution is not finite");
        }
    }
    return curve;
}

}  // namespace

double phi_mass(const ModelParams& params, double x) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < params.types(); ++j) {
        const double r = params.rho(j);
        s += r * params.c[j] / (r + x);
    }
    return s;
}

PhiSolver::PhiSolver(const ModelParams& params) : params_(validate(params)) {
    const auto rho = params_.rho();
    rho_min_ = *std::min_element(rho.begin(), rho.end());
    rho_max_ = *std::max_element(rho.begin(), rho.end());
}

double PhiSolver::operator()(double y) {
    if (!(y > kPhiEdge && y < 1.0 - kPhiEdge)) {
        throw Error(ErrorCode::DomainError, "phi is defined for free mass in (0, 1), got " + std::to_string(y));
    }
    // rho_j / (rho_j + x) is increasing in rho_j, so the J = 1 roots at the
    // extreme rho bracket the solution.
    double lo = rho_min_ * (1.0 - y) / y;
    double hi = rho_max_ * (1.0 - y) / y;
    double x = (last_ >= lo && last_ <= hi) ? last_ : lo;
    const std::size_t J = params_.types();
    for (int iter = 0; iter < 200; ++iter) {
        double g = 0.0;
        double dg = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            const double r = params_.rho(j);
            const double d = r + x;
            g += r * params_.c[j] / d;
            dg -= r * params_.c[j] / (d * d);
        }
        const double res = g - y;
        if (res > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (std::abs(res) <= 1e-15 || hi - lo <= 4e-16 * hi) break;
        double next = x - res / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    if (std::abs(phi_mass(params_, x) - y) > 1e-12) {
        throw Error(ErrorCode::Nonconvergence, "phi root residual above 1e-12 at y = " + std::to_string(y));
    }
    last_ = x;
    return x;
}

double phi(const ModelParams& params, double y) { return PhiSolver(params)(y); }

std::vector<double> collapse_point(const ModelParams& params, double y) {
    const double p = phi(params, y);
    Vec out(params.types());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double r = params.rho(j);
        out[j] = r * params.c[j] / (r + p);
    }
    return out;
}

HInfinity h_infinity(const ModelParams& params) {
    validate(params);
    if (params.beta == 0.0) return {1.0, true};
    return {phi_mass(params, params.rho0()), false};
}

LimitCurve solve_H(const ModelParams& params, double f0_norm, const std::vector<double>& grid) {
    validate(params);
    require_grid(grid);
    if (!(f0_norm > kPhiEdge && f0_norm < 1.0 - kPhiEdge)) {
        throw Error(ErrorCode::DomainError, "initial free mass must lie in (0, 1)");
    }
    PhiSolver solver(params);
    const double beta = params.beta;
    const double delta = params.delta;
    auto curve = integrate_on_grid(
        [&](const Vec& h, Vec& dh) {
            dh.resize(1);
            dh[0] = delta * solver(h[0]) - beta;
        },
        Vec{f0_norm}, grid);

    // Implicit form: t = integral from H(0) to H(t) of du / (delta phi(u) - beta).
    // Checked at the last grid time where the integrand is still moderate.
    auto drift = [&](double u) { return delta * solver(u) - beta; };
    if (std::abs(drift(f0_norm)) >= 1e-2) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            if (std::abs(drift(curve.at(i))) >= 1e-2) k = i;
        }
        if (k > 0) {
            using boost::math::quadrature::gauss_kronrod;
            double err = 0.0;
            const double t = gauss_kronrod<double, 31>::integrate(
                [&](double u) { return 1.0 / drift(u); }, f0_norm, curve.at(k), 15, 1e-13, &err);
            if (std::abs(t - curve.grid[k]) > 1e-8) {
                throw Error(ErrorCode::ConsistencyCheckFailed,
                            "integral form gives t = " + std::to_string(t) + " at grid time " +
                                std::to_string(curve.grid[k]));
            }
        }
    }
    return curve;
}

LimitCurve limit_profile(const ModelParams& params, const LimitCurve& H) {
    PhiSolver solver(params);
    LimitCurve out;
    out.grid = H.grid;
    out.values.reserve(H.size());
    const std::size_t J = params.types();
    for (std::size_t k = 0; k < H.size(); ++k) {
        const double p = solver(H.at(k));
        Vec f(J);
        for (std::size_t j = 0; j < J; ++j) {
            const double r = params.rho(j);
            f[j] = r * params.c[j] / (r + p);
        }
        out.values.push_back(std::move(f));
    }
    return out;
}

std::vector<double> overloaded_drift(const ModelParams& params, const std::vector<double>& f) {
    const std::size_t J = params.types();
    double split = 0.0;
    double pair = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        split += params.eta[j] * (params.c[j] - f[j]);
        pair += params.lambda[j] * f[j];
    }
    Vec d(J);
    for (std::size_t j = 0; j < J; ++j) {
        d[j] = params.eta[j] * (params.c[j] - f[j]) - params.lambda[j] * f[j] * split / pair;
    }
    return d;
}

LimitCurve overloaded_ode(const ModelParams& params, double r, const std::vector<double>& f0,
                          const std::vector<double>& grid) {
    validate(params);
    require_grid(grid);
    const std::size_t J = params.types();
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::DomainError, "agent fraction r must lie in (0, 1)");
    if (f0.size() != J) throw Error(ErrorCode::DimensionMismatch, "f0 has the wrong length");
    const double target = 1.0 - r;
    if (std::abs(std::accumulate(f0.begin(), f0.end(), 0.0) - target) > 1e-9) {
        throw Error(ErrorCode::InitMassMismatch, "initial free mass must equal 1 - r");
    }
    for (std::size_t j = 0; j < J; ++j) {
        if (!(f0[j] > 0.0 && f0[j] <= params.c[j])) {
            throw Error(ErrorCode::InitMassMismatch, "f0[" + std::to_string(j) + "] must lie in (0, c_j]");
        }
    }
    auto curve = integrate_on_grid([&](const Vec& f, Vec& d) { d = overloaded_drift(params, f); }, f0, grid);
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const double mass = std::accumulate(curve.values[k].begin(), curve.values[k].end(), 0.0);
        if (std::abs(mass - target) > 1e-9) {
            throw Error(ErrorCode::ConsistencyCheckFailed,
                        "free mass drifted from 1 - r at t = " + std::to_string(curve.grid[k]));
        }
    }
    return curve;
}

std::vector<double> overloaded_equilibrium(const ModelParams& params, double r) {
    if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::DomainError, "agent fraction r must lie in (0, 1)");
    return collapse_point(params, 1.0 - r);
}

std::vector<double> critical_drift(const ModelParams& params, const std::vector<double>& f) {
    const double norm = std::accumulate(f.begin(), f.end(), 0.0);
    Vec d(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) d[j] = params.c[j] * params.eta[j] - params.lambda[j] * f[j] * norm;
    return d;
}

LimitCurve critical_ode(const ModelParams& params, const std::vector<double>& f0bar,
                        const std::vector<double>& grid) {
    validate(params);
    require_grid(grid);
    if (f0bar.size() != params.types()) throw Error(ErrorCode::DimensionMismatch, "f0bar has the wrong length");
    for (double x : f0bar) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::DomainError, "f0bar must be non-negative");
    }
    return integrate_on_grid([&](const Vec& f, Vec& d) { d = critical_drift(params, f); }, f0bar, grid);
}

std::vector<double> critical_equilibrium(const ModelParams& params) {
    validate(params);
    double s = 0.0;
    for (std::size_t j = 0; j < params.types(); ++j) s += params.c[j] * params.rho(j);
    const double root = std::sqrt(s);
    Vec out(params.types());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = params.c[j] * params.rho(j) / root;
    return out;
}

DiffusionPath clt_diffusion(const ModelParams& params, const LimitCurve& fbar, const std::vector<double>& fhat0,
                            std::uint64_t seed, const DiffusionOptions& options, std::uint64_t stream) {
    validate(params);
    require_grid(fbar.grid);
    const std::size_t J = params.types();
    if (fbar.dim() != J || fhat0.size() != J || fbar.values.size() != fbar.grid.size()) {
        throw Error(ErrorCode::DimensionMismatch, "fbar and fhat0 must have one coordinate per type");
    }
    if (!(options.max_step > 0.0) || options.noise_refinement == 0) {
        throw Error(ErrorCode::InvalidConfig, "diffusion step and refinement must be positive");
    }
    const auto& grid = fbar.grid;

    // Variance check in the form -fbar' + 2 eta c, with fbar' taken from the
    // supplied curve; a curve that does not solve the critical ODE can make it
    // negative.
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t j = 0; j < J; ++j) {
            if (fbar.at(k, j) < 0.0) throw Error(ErrorCode::NegativeVariance, "fbar has a negative coordinate");
        }
        if (grid.size() < 2) break;
        const std::size_t a = k == 0 ? 0 : k - 1;
        const std::size_t b = k + 1 == grid.size() ? k : k + 1;
        for (std::size_t j = 0; j < J; ++j) {
            const double slope = (fbar.at(b, j) - fbar.at(a, j)) / (grid[b] - grid[a]);
            const double var = -slope + 2.0 * params.eta[j] * params.c[j];
            if (var < -1e-9) {
                throw Error(ErrorCode::NegativeVariance,
                            "diffusion coefficient negative at t = " + std::to_string(grid[k]));
            }
        }
    }

    DiffusionPath path;
    path.grid = grid;
    path.seed = seed;
    path.stream = stream;
    path.values.reserve(grid.size());
    Rng rng(seed, stream);
    Vec x = fhat0;
    Vec fb(J);
    Vec dx(J);
    path.values.push_back(x);
    const unsigned m = options.noise_refinement;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double span = grid[k + 1] - grid[k];
        const auto steps = static_cast<std::size_t>(std::ceil(span / options.max_step - 1e-9));
        const double h = span / static_cast<double>(steps);
        const double sub = std::sqrt(h / static_cast<double>(m));
        for (std::size_t s = 0; s < steps; ++s) {
            const double theta = static_cast<double>(s) / static_cast<double>(steps);
            for (std::size_t j = 0; j < J; ++j) fb[j] = (1.0 - theta) * fbar.at(k, j) + theta * fbar.at(k + 1, j);
            const double fb_norm = std::accumulate(fb.begin(), fb.end(), 0.0);
            const double x_sum = std::accumulate(x.begin(), x.end(), 0.0);
            for (std::size_t j = 0; j < J; ++j) {
                dx[j] = -params.lambda[j] * (x[j] * fb_norm + fb[j] * x_sum) * h;
            }
            for (unsigned i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < J; ++j) {
                    const double z = options.zero_noise ? 0.0 : rng.normal();
                    const double sigma = std::sqrt(params.eta[j] * params.c[j] + params.lambda[j] * fb[j] * fb_norm);
                    dx[j] += sigma * sub * z;
                }
            }
            for (std::size_t j = 0; j < J; ++j) x[j] += dx[j];
        }
        path.values.push_back(x);
    }
    return path;
}

CrnFixedPoint crn_fixed_point(const FiniteModel& model) {
    if (model.regime != RegimeKind::Dynamic) {
        throw Error(ErrorCode::UnsupportedRegime, "the reaction-network fixed point needs the dynamic regime");
    }
    const auto& p = model.params;
    const double rho0 = p.rho0();
    CrnFixedPoint fp;
    fp.w = rho0;
    fp.u.resize(model.types());
    fp.v.resize(model.types());
    for (std::size_t j = 0; j < model.types(); ++j) {
        const double r = p.rho(j);
        const auto C = static_cast<double>(model.C[j]);
        fp.u[j] = C * r / (r + rho0);
        fp.v[j] = C - fp.u[j];
    }
    return fp;
}

}  // namespace pairlim
