#include <doctest.h>

#include "oracles.hpp"
#include "pairlim/error.hpp"
#include "pairlim/limits.hpp"
#include "pairlim/stationary.hpp"
#include "pairlim/verify.hpp"

#include <cmath>

using namespace pairlim;

namespace {

ModelParams unit1(double beta = 1.0) { return ModelParams{{1.0}, {1.0}, {1.0}, beta, 1.0}; }

/// Dense generator of the model on the table's state space; transitions that
/// leave the space are dropped (and so are their diagonal contributions).
std::vector<std::vector<double>> generator(const FiniteModel& m, const StateIndex& idx) {
    const std::size_t n = idx.size();
    const std::size_t J = m.types();
    std::vector<std::vector<double>> Q(n, std::vector<double>(n, 0.0));
    std::vector<double> rates(rate_slots(J));
    for (std::size_t i = 0; i < n; ++i) {
        const State x = idx.state(i);
        fill_rates(m, x.f, x.z, rates);
        for (std::size_t s = 0; s < rates.size(); ++s) {
            if (rates[s] <= 0.0) continue;
            State y = x;
            apply_slot(s, J, y.f, y.z);
            if (!idx.contains(y)) continue;
            Q[i][idx.index(y)] += rates[s];
            Q[i][i] -= rates[s];
        }
    }
    return Q;
}

}  // namespace

TEST_CASE("critical J=1 C=(2) table matches the hand enumeration") {
    const auto m = build_finite(unit1(), 2, RegimeRequest::critical());
    const auto t = enumerate_Z(m);
    REQUIRE(t.size() == 3);
    CHECK(t.prob(0) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(t.prob(1) == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
    CHECK(t.prob(2) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    CHECK(t.log_Z == doctest::Approx(std::log(3.5)).epsilon(1e-14));
}

TEST_CASE("dynamic weight of the all-free, agent-free state") {
    const ModelParams p{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 1.0, 2.0};
    const auto m = build_finite(p, 6, RegimeRequest::dynamic());
    const auto fp = crn_fixed_point(m);
    double want = 0.0;
    for (std::size_t j = 0; j < 2; ++j) want += 3.0 * std::log(fp.u[j]) - std::log(6.0);
    CHECK(stationary_weight(m, State{{3, 3}, 0}) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("critical weight ratios cancel to the jump-rate ratio") {
    const ModelParams p{{0.5, 0.5}, {1.0, 2.0}, {1.5, 1.0}, 0.0, 1.0};
    const auto m = build_finite(p, 8, RegimeRequest::critical());
    for (Count a = 0; a < 4; ++a) {
        for (Count b = 0; b <= 4; ++b) {
            const State x = make_state(m, {a, b});
            const State y = make_state(m, {a + 1, b});
            const double ratio = std::exp(stationary_weight(m, y) - stationary_weight(m, x));
            const double want = p.rho(0) * static_cast<double>(4 - a) / static_cast<double>(a + 1) /
                                static_cast<double>(a + b + 1);
            CHECK(ratio == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("product forms agree with the linear-solve oracle") {
    SUBCASE("critical") {
        const ModelParams p{{0.4, 0.6}, {1.0, 2.5}, {0.7, 1.3}, 0.0, 1.0};
        const auto m = build_finite(p, 5, RegimeRequest::critical());
        const auto t = enumerate_Z(m);
        const auto pi = oracle::stationary_of_generator(generator(m, t.index()));
        for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.prob(i) == doctest::Approx(pi[i]).epsilon(1e-10));
    }
    SUBCASE("dynamic, truncated far in the tail") {
        const ModelParams p{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 1.0, 2.0};
        const auto m = build_finite(p, 4, RegimeRequest::dynamic());
        const auto t = enumerate_Z(m, 25);
        const auto pi = oracle::stationary_of_generator(generator(m, t.index()));
        for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(t.prob(i) - pi[i]) <= 1e-12);
    }
}

TEST_CASE("normalization is insensitive to z_cap once z_cap >= 10 w") {
    const ModelParams p{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 3.0, 1.0};
    const auto m = build_finite(p, 6, RegimeRequest::dynamic());
    const auto a = enumerate_Z(m, 30);
    const auto b = enumerate_Z(m, 35);
    CHECK(std::abs(a.log_Z - b.log_Z) < 1e-10);
    double total = 0.0;
    for (double x : a.probabilities()) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(default_z_cap(p) == 30);
    CHECK(default_z_cap(ModelParams{{1.0}, {1.0}, {1.0}, 7.0, 2.0}) == 35);
}

TEST_CASE("detailed balance in the critical regime") {
    CHECK(check_detailed_balance(build_finite(unit1(), 2, RegimeRequest::critical())) <= 1e-12);
    const ModelParams p{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 0.0, 1.0};
    const auto m = build_finite(p, 4, RegimeRequest::critical());
    REQUIRE(m.C == std::vector<Count>{2, 2});
    CHECK(check_detailed_balance(m) <= 1e-12);

    // The table of the original chain no longer balances a chain whose
    // pairing rate moved by 1%.
    auto bumped = m;
    bumped.params.lambda[0] *= 1.01;
    CHECK(check_detailed_balance(bumped, enumerate_Z(m)) > 1e-3);
}

TEST_CASE("global balance of the dynamic product form") {
    const auto m = build_finite(unit1(), 1, RegimeRequest::dynamic());
    const auto good = global_balance_residual(m, enumerate_Z(m, 20));
    CHECK(good.max_residual <= 1e-8);
    CHECK_FALSE(good.truncation_flagged);

    const auto bad = global_balance_residual(m, enumerate_Z(m, 1));
    CHECK(bad.max_residual > 1e-2);
    CHECK(bad.truncation_flagged);

    const auto dead = build_finite(unit1(0.0), 3, RegimeRequest::dynamic());
    const auto t = enumerate_Z(dead, 5);
    const auto idx = t.index();
    CHECK(t.prob(idx.index(State{{3}, 0})) == doctest::Approx(1.0));
    CHECK(global_balance_residual(dead, t).max_residual <= 1e-14);
}

TEST_CASE("enumeration limits and unsupported regimes") {
    const ModelParams p{{0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0};
    try {
        enumerate_Z(build_finite(p, 20000, RegimeRequest::critical()));
        FAIL("expected SpaceTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SpaceTooLarge);
    }
    try {
        enumerate_Z(build_finite(p, 10, RegimeRequest::overloaded(0.5)));
        FAIL("expected UnsupportedRegime");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedRegime);
    }
}

TEST_CASE("long-run SSA occupancy matches the exact law") {
    SUBCASE("critical J=2") {
        const ModelParams p{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 0.0, 1.0};
        const auto m = build_finite(p, 4, RegimeRequest::critical());
        const auto t = enumerate_Z(m);
        SimConfig cfg;
        cfg.horizon = 2e5;
        cfg.sample_grid = {0.0};
        cfg.seed = 17;
        cfg.record_events = true;
        const auto tr = simulate(m, make_state(m, {1, 1}), cfg);
        const auto law = empirical_state_law(tr, t);
        CHECK(law.outside == 0.0);
        CHECK(total_variation(law.law, t.probabilities()) <= 0.02);
    }
    SUBCASE("dynamic J=1") {
        const auto m = build_finite(unit1(), 2, RegimeRequest::dynamic());
        const auto t = enumerate_Z(m);
        SimConfig cfg;
        cfg.horizon = 2e5;
        cfg.sample_grid = {0.0};
        cfg.seed = 18;
        cfg.record_events = true;
        const auto tr = simulate(m, State{{1}, 0}, cfg);
        const auto law = empirical_state_law(tr, t);
        CHECK(law.outside <= 1e-6);
        CHECK(total_variation(law.law, t.probabilities()) <= 0.02);
    }
}

TEST_CASE("stationary free mass grows like sqrt(N) in the critical regime") {
    const ModelParams p{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 0.0, 1.0};
    std::vector<double> scaled;
    for (Count N : {10, 20, 40}) {
        const auto t = enumerate_Z(build_finite(p, N, RegimeRequest::critical()));
        scaled.push_back(mean_total_free(t) / std::sqrt(static_cast<double>(N)));
    }
    for (double s : scaled) CHECK(std::abs(s / scaled.back() - 1.0) <= 0.15);
}
