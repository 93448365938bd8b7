#include <doctest.h>

#include "oracles.hpp"
#include "pairlim/error.hpp"
#include "pairlim/limits.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace pairlim;

namespace {

ModelParams make(std::vector<double> c, std::vector<double> lambda, std::vector<double> eta, double beta,
                 double delta) {
    return ModelParams{std::move(c), std::move(lambda), std::move(eta), beta, delta};
}

// rho = (1, 2), rho_0 = 0.5
ModelParams asym() { return make({0.5, 0.5}, {1.0, 0.5}, {1.0, 1.0}, 1.0, 2.0); }

ModelParams canonical() { return make({0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 1.0, 2.0); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("phi closed forms and oracle") {
    CHECK(phi(make({1.0}, {1.0}, {1.0}, 1.0, 1.0), 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(phi(make({0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0), 0.25) == doctest::Approx(3.0).epsilon(1e-12));
    // 0.5 / (1 + x) + 1 / (2 + x) = 0.6
    const double want = oracle::bisect_phi({0.5, 0.5}, {1.0, 2.0}, 0.6);
    CHECK(std::abs(phi(asym(), 0.6) - want) <= 1e-11);
}

TEST_CASE("phi inverse identity over the unit interval") {
    for (const auto& p : {asym(), canonical(), make({0.2, 0.3, 0.5}, {3.0, 0.1, 1.0}, {0.5, 2.0, 1.0}, 1.0, 1.0)}) {
        PhiSolver solver(p);
        for (int k = 1; k <= 9; ++k) {
            const double y = 0.1 * k;
            CHECK(std::abs(phi_mass(p, solver(y)) - y) <= 1e-10);
            CHECK(std::abs(phi_mass(p, phi(p, y)) - y) <= 1e-12);
        }
    }
}

TEST_CASE("phi rejects masses outside (0, 1)") {
    for (double y : {0.0, 1.0, -0.1, 1.5, 1e-10, 1.0 - 1e-10}) {
        try {
            phi(asym(), y);
            FAIL("expected DomainError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DomainError);
        }
    }
}

TEST_CASE("h_infinity") {
    CHECK(h_infinity(make({1.0}, {1.0}, {1.0}, 1.0, 1.0)).value == doctest::Approx(0.5));
    // rho = (1, 2), rho_0 = 0.5
    CHECK(h_infinity(asym()).value == doctest::Approx(0.5 / 1.5 + 0.5 * 2.0 / 2.5));
    const auto degenerate = h_infinity(make({1.0}, {1.0}, {1.0}, 0.0, 1.0));
    CHECK(degenerate.degenerate);
    CHECK(degenerate.value == 1.0);
    CHECK(h_infinity(make({1.0}, {1.0}, {1.0}, 1e-9, 1.0)).value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("solve_H at the fixed point is constant") {
    const auto p = canonical();
    const double hinf = h_infinity(p).value;
    const auto H = solve_H(p, hinf, uniform_grid(10.0, 101));
    for (std::size_t k = 0; k < H.size(); ++k) CHECK(std::abs(H.at(k) - hinf) <= 1e-10);
}

TEST_CASE("solve_H relaxes monotonically toward H_inf from both sides") {
    const auto p = make({1.0}, {1.0}, {1.0}, 1.0, 1.0);
    for (double h0 : {0.2, 0.9}) {
        const auto H = solve_H(p, h0, uniform_grid(20.0, 201));
        for (std::size_t k = 1; k < H.size(); ++k) {
            const double d0 = std::abs(H.at(k - 1) - 0.5);
            const double d1 = std::abs(H.at(k) - 0.5);
            CHECK(d1 <= d0 + 1e-9);
            CHECK((H.at(k) - 0.5) * (h0 - 0.5) >= -1e-9);
        }
        CHECK(H.values.back()[0] == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("solve_H agrees with the quadrature inversion of the integral form") {
    const auto p = asym();
    const auto H = solve_H(p, 0.95, uniform_grid(0.3, 4));
    const double want = oracle::invert_mass_integral({0.5, 0.5}, {1.0, 2.0}, 1.0, 2.0, 0.95, 0.3);
    CHECK(std::abs(H.values.back()[0] - want) <= 1e-8);
    const auto Hc = solve_H(canonical(), 0.3, uniform_grid(0.3, 4));
    const double wantc = oracle::invert_mass_integral({0.5, 0.5}, {1.0, 0.5}, 1.0, 2.0, 0.3, 0.3);
    CHECK(std::abs(Hc.values.back()[0] - wantc) <= 1e-8);
}

TEST_CASE("solve_H terminal value approaches h_infinity") {
    for (const auto& p : {canonical(), asym(), make({1.0}, {1.0}, {1.0}, 1.0, 1.0)}) {
        const auto H = solve_H(p, 0.9, uniform_grid(50.0, 501));
        CHECK(std::abs(H.values.back()[0] - h_infinity(p).value) <= 1e-6);
    }
}

TEST_CASE("limit_profile sums to H and matches the bisection oracle") {
    const auto p = asym();
    const auto H = solve_H(p, 0.9, uniform_grid(3.0, 31));
    const auto f = limit_profile(p, H);
    for (std::size_t k = 0; k < H.size(); ++k) {
        CHECK(std::abs(sum(f.values[k]) - H.at(k)) <= 1e-12);
        const double x = oracle::bisect_phi({0.5, 0.5}, {1.0, 2.0}, H.at(k));
        CHECK(f.at(k, 0) == doctest::Approx(0.5 / (1.0 + x)).epsilon(1e-10));
        CHECK(f.at(k, 1) == doctest::Approx(1.0 / (2.0 + x)).epsilon(1e-10));
    }
    LimitCurve half{{0.0, 1.0}, {{0.5}, {0.5}}};
    const auto sym = limit_profile(make({0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0), half);
    CHECK(sym.at(0, 0) == doctest::Approx(0.25));
    CHECK(sym.at(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("overloaded ODE conserves mass and reaches the equilibrium") {
    const auto p = canonical();
    const auto f = overloaded_ode(p, 0.4, {0.45, 0.15}, uniform_grid(30.0, 301));
    for (const auto& v : f.values) CHECK(std::abs(sum(v) - 0.6) <= 1e-9);
    const auto eq = overloaded_equilibrium(p, 0.4);
    CHECK(std::abs(sum(eq) - 0.6) <= 1e-12);
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(f.values.back()[j] - eq[j]) <= 1e-6);

    // Independent route to the equilibrium: the zero of the drift along the
    // mass constraint, by bisection on f_0.
    const double f0 = oracle::bisect([&](double x) { return overloaded_drift(p, {x, 0.6 - x})[0]; }, 0.1, 0.5);
    CHECK(eq[0] == doctest::Approx(f0).epsilon(1e-10));

    const auto still = overloaded_ode(p, 0.4, eq, uniform_grid(5.0, 11));
    for (const auto& v : still.values) CHECK(std::abs(v[0] - eq[0]) <= 1e-10);

    const auto one = overloaded_ode(make({1.0}, {1.0}, {2.0}, 1.0, 1.0), 0.3, {0.7}, uniform_grid(5.0, 11));
    for (const auto& v : one.values) CHECK(v[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(overloaded_equilibrium(make({1.0}, {1.0}, {1.0}, 1.0, 1.0), 0.5)[0] == doctest::Approx(0.5));
}

TEST_CASE("overloaded ODE rejects inconsistent initial mass") {
    try {
        overloaded_ode(canonical(), 0.4, {0.3, 0.2}, uniform_grid(1.0, 3));
        FAIL("expected InitMassMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InitMassMismatch);
    }
    CHECK_THROWS_AS(overloaded_equilibrium(canonical(), 1.0), Error);
}

TEST_CASE("critical equilibrium closed forms") {
    const auto a = critical_equilibrium(make({0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0));
    CHECK(a[0] == doctest::Approx(0.5));
    CHECK(a[1] == doctest::Approx(0.5));
    const auto b = critical_equilibrium(make({0.5, 0.5}, {1.0, 1.0}, {2.0, 2.0}, 1.0, 1.0));
    CHECK(b[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    for (const auto& p : {canonical(), asym()}) {
        const auto eq = critical_equilibrium(p);
        for (double d : critical_drift(p, eq)) CHECK(std::abs(d) <= 1e-14);
    }
}

TEST_CASE("critical ODE converges to the equilibrium") {
    const auto p = canonical();
    const auto f = critical_ode(p, {2.0, 0.1}, uniform_grid(50.0, 501));
    const auto eq = critical_equilibrium(p);
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(f.values.back()[j] - eq[j]) <= 1e-6);
    const auto still = critical_ode(p, eq, uniform_grid(5.0, 6));
    for (const auto& v : still.values) CHECK(std::abs(v[0] - eq[0]) <= 1e-10);
}

TEST_CASE("critical ODE preserves the order of the total mass") {
    // d||f||/dt = <c, eta> - <lambda, f> ||f||; with equal lambdas this is a
    // scalar equation, so ordered masses stay ordered.
    const auto p = make({0.3, 0.7}, {1.5, 1.5}, {1.0, 2.0}, 1.0, 1.0);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    const auto grid = uniform_grid(5.0, 51);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> lo{u(gen), u(gen)};
        std::vector<double> hi{lo[0] + u(gen), lo[1] + u(gen)};
        const auto a = critical_ode(p, lo, grid);
        const auto b = critical_ode(p, hi, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(sum(a.values[k]) <= sum(b.values[k]) + 1e-12);
    }
}

TEST_CASE("diffusion without noise stays at zero around the equilibrium") {
    const auto p = canonical();
    const auto eq = critical_equilibrium(p);
    const auto grid = uniform_grid(2.0, 21);
    const auto fbar = critical_ode(p, eq, grid);
    DiffusionOptions opt;
    opt.zero_noise = true;
    const auto path = clt_diffusion(p, fbar, {0.0, 0.0}, 1, opt);
    CHECK(path.values.front() == std::vector<double>{0.0, 0.0});
    for (const auto& v : path.values) {
        CHECK(std::abs(v[0]) <= 1e-15);
        CHECK(std::abs(v[1]) <= 1e-15);
    }
    // At equilibrium the coefficient eta c + lambda f ||f|| equals 2 eta c.
    const double norm = sum(eq);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(p.eta[j] * p.c[j] + p.lambda[j] * eq[j] * norm == doctest::Approx(2.0 * p.eta[j] * p.c[j]));
    }
}

TEST_CASE("diffusion without noise follows the linear drift") {
    // J = 1 at equilibrium: dx = -2 lambda fbar x dt, so x(t) = x0 exp(-2 lambda fbar t).
    const auto p = make({1.0}, {1.0}, {1.0}, 1.0, 1.0);
    const auto grid = uniform_grid(1.0, 11);
    const auto fbar = critical_ode(p, {1.0}, grid);
    DiffusionOptions opt;
    opt.zero_noise = true;
    opt.max_step = 1e-4;
    const auto path = clt_diffusion(p, fbar, {1.0}, 1, opt);
    CHECK(path.values.back()[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-3));
}

TEST_CASE("Euler-Maruyama step halving barely moves the mean") {
    const auto p = make({1.0}, {1.0}, {1.0}, 1.0, 1.0);
    const auto grid = uniform_grid(1.0, 101);
    const auto fbar = critical_ode(p, {2.0}, grid);
    DiffusionOptions coarse;
    coarse.noise_refinement = 2;
    DiffusionOptions fine;
    fine.max_step = 5e-4;
    double mc = 0.0;
    double mf = 0.0;
    const int R = 2000;
    for (int i = 0; i < R; ++i) {
        mc += clt_diffusion(p, fbar, {0.3}, 9, coarse, i).values.back()[0];
        mf += clt_diffusion(p, fbar, {0.3}, 9, fine, i).values.back()[0];
    }
    CHECK(std::abs(mc - mf) / R <= 2e-3);
}

TEST_CASE("an inconsistent fbar curve is reported as negative variance") {
    const auto p = make({1.0}, {1.0}, {1.0}, 1.0, 1.0);
    // Rises much faster than c eta allows.
    LimitCurve bad{{0.0, 0.1, 0.2}, {{0.0}, {1.0}, {2.0}}};
    try {
        clt_diffusion(p, bad, {0.0}, 1);
        FAIL("expected NegativeVariance");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeVariance);
    }
}

TEST_CASE("reaction-network fixed point") {
    const auto zero = build_finite(make({1.0}, {1.0}, {1.0}, 0.0, 1.0), 100, RegimeRequest::dynamic());
    const auto a = crn_fixed_point(zero);
    CHECK(a.u[0] == 100.0);
    CHECK(a.v[0] == 0.0);
    CHECK(a.w == 0.0);
    const auto one = build_finite(make({1.0}, {1.0}, {1.0}, 1.0, 1.0), 100, RegimeRequest::dynamic());
    CHECK(crn_fixed_point(one).u[0] == doctest::Approx(50.0));
    // u / N is the limit profile at H_inf.
    const auto p = canonical();
    const auto big = build_finite(p, 100000, RegimeRequest::dynamic());
    const auto fp = crn_fixed_point(big);
    const auto prof = collapse_point(p, h_infinity(p).value);
    for (std::size_t j = 0; j < 2; ++j) CHECK(fp.u[j] / 1e5 == doctest::Approx(prof[j]).epsilon(1e-9));
}
