#include <doctest.h>

#include "pairlim/error.hpp"
#include "pairlim/model.hpp"

#include <deque>
#include <set>

using namespace pairlim;

namespace {

ModelParams params2() { return ModelParams{{0.5, 0.5}, {1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0}; }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("validate accepts the minimal model and rejects broken ones") {
    ModelParams p{{1.0}, {1.0}, {1.0}, 1.0, 1.0};
    CHECK(validate(p) == p);

    ModelParams bad_c{{0.5, 0.6}, {1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0};
    CHECK(code_of([&] { validate(bad_c); }) == ErrorCode::ProportionsDoNotSumToOne);

    ModelParams zero_delta = p;
    zero_delta.delta = 0.0;
    CHECK(code_of([&] { validate(zero_delta); }) == ErrorCode::NonPositiveRate);

    ModelParams empty{};
    CHECK(code_of([&] { validate(empty); }) == ErrorCode::EmptyModel);

    ModelParams neg_lambda = params2();
    neg_lambda.lambda[1] = -1.0;
    CHECK(code_of([&] { validate(neg_lambda); }) == ErrorCode::NonPositiveRate);

    ModelParams no_beta = p;
    no_beta.beta = 0.0;
    CHECK_NOTHROW(validate(no_beta));
    CHECK(no_beta.rho0() == 0.0);
}

TEST_CASE("build_finite apportions by largest remainder") {
    ModelParams p{{1.0 / 3.0, 2.0 / 3.0}, {1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0};
    const auto m = build_finite(p, 10, RegimeRequest::dynamic());
    CHECK(m.C == std::vector<Count>{3, 7});

    const auto over = build_finite(params2(), 100, RegimeRequest::overloaded(0.4));
    CHECK(over.C == std::vector<Count>{50, 50});
    CHECK(over.agents == 40);

    CHECK(code_of([&] { build_finite(params2(), 1, RegimeRequest::dynamic()); }) == ErrorCode::NTooSmall);
    CHECK(code_of([&] { build_finite(params2(), 10, RegimeRequest::overloaded(1.0)); }) == ErrorCode::InvalidRegime);
}

TEST_CASE("apportionment sums to N and stays within J of c N") {
    const std::vector<std::vector<double>> shares{{0.2, 0.3, 0.5}, {0.1, 0.1, 0.1, 0.7}, {1.0 / 7, 6.0 / 7}};
    for (const auto& c : shares) {
        ModelParams p{c, std::vector<double>(c.size(), 1.0), std::vector<double>(c.size(), 1.0), 1.0, 1.0};
        for (Count N : {13, 100, 999, 12345}) {
            const auto m = build_finite(p, N, RegimeRequest::dynamic());
            Count sum = 0;
            for (std::size_t j = 0; j < c.size(); ++j) {
                sum += m.C[j];
                CHECK(std::abs(static_cast<double>(m.C[j]) - c[j] * static_cast<double>(N)) <=
                      static_cast<double>(c.size()));
            }
            CHECK(sum == N);
        }
    }
}

TEST_CASE("ties in apportionment go to the lowest index") {
    const std::vector<double> share{0.5, 0.5};
    CHECK(apportion(share, 3) == std::vector<Count>{2, 1});
}

TEST_CASE("enabled_transitions matches the Q-matrix") {
    const auto m = build_finite(params2(), 10, RegimeRequest::dynamic());
    const auto t = enabled_transitions(m, State{{2, 3}, 1});
    std::vector<Transition> want{{TransitionKind::Pair, 0, 2.0},  {TransitionKind::Pair, 1, 3.0},
                                 {TransitionKind::Split, 0, 3.0}, {TransitionKind::Split, 1, 2.0},
                                 {TransitionKind::AgentBirth, 0, 1.0}, {TransitionKind::AgentDeath, 0, 1.0}};
    CHECK(t == want);

    const auto full = enabled_transitions(m, State{{5, 5}, 0});
    REQUIRE(full.size() == 1);
    CHECK(full[0].kind == TransitionKind::AgentBirth);

    const auto crit = build_finite(params2(), 10, RegimeRequest::critical());
    const auto t0 = enabled_transitions(crit, make_state(crit, {0, 0}));
    REQUIRE(t0.size() == 2);
    CHECK(t0[0] == Transition{TransitionKind::Split, 0, 5.0});
    CHECK(t0[1] == Transition{TransitionKind::Split, 1, 5.0});

    CHECK(code_of([&] { enabled_transitions(m, State{{6, 0}, 0}); }) == ErrorCode::InvalidState);
    CHECK(code_of([&] { enabled_transitions(crit, State{{1, 1}, 0}); }) == ErrorCode::InvalidState);
}

TEST_CASE("total_free") {
    CHECK(total_free(State{{2, 3}, 0}) == 5);
    CHECK(total_free(State{{0, 0}, 0}) == 0);
    const auto m = build_finite(params2(), 10, RegimeRequest::dynamic());
    CHECK(total_free(State{m.C, 0}) == 10);
}

TEST_CASE("transition deltas") {
    CHECK(Transition{TransitionKind::Pair, 1, 1.0}.delta_f(2) == std::vector<int>{0, -1});
    CHECK(Transition{TransitionKind::Pair, 1, 1.0}.delta_z() == -1);
    CHECK(Transition{TransitionKind::Split, 0, 1.0}.delta_f(2) == std::vector<int>{1, 0});
    CHECK(Transition{TransitionKind::AgentBirth, 0, 1.0}.delta_z() == 1);
    CHECK(Transition{TransitionKind::AgentDeath, 0, 1.0}.delta_z() == -1);
}

// Breadth-first search over every reachable state of small fixed-regime
// models: each transition keeps the state valid and z = C_Z + |f| - N.
TEST_CASE("reachable states stay valid in the fixed regimes") {
    for (auto req : {RegimeRequest::critical(), RegimeRequest::overloaded(0.5)}) {
        const auto m = build_finite(ModelParams{{0.5, 0.5}, {1.0, 2.0}, {1.0, 1.0}, 0.0, 1.0}, 6, req);
        std::set<std::vector<Count>> seen;
        std::deque<State> todo{make_state(m, m.C)};
        seen.insert(m.C);
        while (!todo.empty()) {
            const State s = todo.front();
            todo.pop_front();
            double total = 0.0;
            for (const auto& t : enabled_transitions(m, s)) {
                total += t.rate;
                const State next = apply(s, t);
                CHECK(state_violation(m, next).empty());
                CHECK(next.z == m.agents + total_free(next) - m.N);
                if (seen.insert(next.f).second) todo.push_back(next);
            }
            double bound = 0.0;
            for (std::size_t j = 0; j < 2; ++j) {
                bound += m.params.lambda[j] * m.C[j] * static_cast<double>(m.agents) + m.params.eta[j] * m.C[j];
            }
            CHECK(total <= bound);
        }
        CHECK(seen.size() > 1);
    }
}
