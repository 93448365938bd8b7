#include <doctest.h>

#include "pairlim/claims.hpp"
#include "pairlim/error.hpp"
#include "pairlim/io.hpp"
#include "pairlim/limits.hpp"

#include <openssl/sha.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace pairlim;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

const char* kMinimal = R"({
  "model": {"c": [0.5, 0.5], "lambda": [1, 2], "eta": [1, 1], "beta": 1, "delta": 2},
  "regime": {"kind": "dynamic"},
  "N": 100
})";

ExperimentConfig full_config() {
    ExperimentConfig c;
    c.model = ModelParams{{0.25, 0.75}, {1.5, 2.0}, {1.0, 0.5}, 0.7, 1.3};
    c.regime = RegimeRequest::overloaded(0.3);
    c.N_list = {100, 400};
    c.initial = InitialSpec{InitKind::Explicit, {0.2, 0.5}, 0.0, 0};
    c.horizon = 2.5;
    c.grid_points = 51;
    c.timescale = Timescale::Raw;
    c.replications = 7;
    c.seed = 18446744073709551615ULL;
    c.output_dir = "results/x";
    c.options.burn_in = 0.2;
    c.options.windows = 8;
    c.options.tolerance = 0.04;
    c.options.K = 11;
    c.options.load = 0.3;
    c.options.z_cap = 40;
    c.options.limit_shift = 0.1;
    return c;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("minimal config picks the documented defaults") {
    const auto c = parse_config(kMinimal);
    CHECK(c.N() == 100);
    CHECK(c.initial.kind == InitKind::Equilibrium);
    CHECK(c.effective_timescale() == Timescale::Scaled);
    CHECK(c.replications == 1);
    CHECK(c.grid_points == 101);
}

TEST_CASE("config round-trips through text") {
    const auto c = full_config();
    const auto text = dump_config(c);
    const auto back = parse_config(text);
    CHECK(back == c);
    CHECK(dump_config(back) == text);
    CHECK(config_hash(back) == config_hash(c));

    auto other = c;
    other.seed = 1;
    CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("config hash is a git blob hash of the canonical text") {
    auto c = parse_config(kMinimal);
    c.output_dir.clear();
    const auto text = dump_config(c);
    std::string framed = "blob " + std::to_string(text.size());
    framed.push_back('\0');
    framed += text;
    unsigned char d[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char*>(framed.data()), framed.size(), d);
    std::ostringstream hex;
    for (unsigned char b : d) hex << std::hex << (b < 16 ? "0" : "") << static_cast<int>(b);
    CHECK(config_hash(c) == hex.str());
    CHECK(config_hash(c).size() == 40);

    auto moved = c;
    moved.output_dir = "elsewhere";
    CHECK(config_hash(moved) == config_hash(c));
}

TEST_CASE("strict parsing rejects typos and inconsistent fields") {
    const std::string base = kMinimal;
    CHECK(code_of([&] { parse_config(replace(base, "\"lambda\"", "\"lamda\"")); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { parse_config(replace(base, "\"N\": 100", "\"N\": 100, \"extra\": 1")); }) ==
          ErrorCode::ConfigError);
    CHECK(code_of([&] { parse_config("{ not json"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { parse_config(replace(base, "\"N\": 100", "\"N_list\": []")); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { parse_config(replace(base, "\"N\": 100", "\"N_list\": [400, 100]")); }) ==
          ErrorCode::ConfigError);
    CHECK(code_of([&] { parse_config(replace(base, "\"N\": 100", "\"N\": 100, \"horizon\": 0")); }) ==
          ErrorCode::ConfigError);
    CHECK(code_of([&] { parse_config(replace(base, "\"N\": 100", "\"N\": \"many\"")); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { parse_config(replace(base, "[0.5, 0.5]", "[0.5, 0.6]")); }) ==
          ErrorCode::ProportionsDoNotSumToOne);
    CHECK(code_of([&] { parse_config(replace(base, "\"dynamic\"", "\"fast\"")); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] {
              parse_config(replace(base, "\"dynamic\"}", "\"overloaded\", \"r\": 0.4}, \"initial\": {\"kind\": "
                                                         "\"explicit\", \"f0\": [0.5, 0.5]}"));
          }) == ErrorCode::InvalidInit);
    CHECK(code_of([&] {
              parse_config(replace(base, "\"dynamic\"}", "\"critical\"}, \"initial\": {\"kind\": \"equilibrium\", "
                                                         "\"z0\": 3}"));
          }) == ErrorCode::ConfigError);
}

TEST_CASE("initial states follow the regime's scaling") {
    auto c = parse_config(kMinimal);
    c.initial = InitialSpec{InitKind::Explicit, {0.1, 0.3}, 0.0, 4};
    auto m = finite_model(c, 100);
    CHECK(initial_state(c, m) == State{{10, 30}, 4});

    c.regime = RegimeRequest::critical();
    c.initial.z0 = 0;
    c.N_list = {10000};
    m = finite_model(c, 10000);
    const auto s = initial_state(c, m);
    CHECK(s.f == std::vector<Count>{10, 30});
    CHECK(s.z == 40);

    c.regime = RegimeRequest::overloaded(0.4);
    c.N_list = {1001};
    c.initial = InitialSpec{InitKind::Fraction, {}, 0.6, 0};
    m = finite_model(c, 1001);
    const auto o = initial_state(c, m);
    CHECK(o.z == 0);
    CHECK(total_free(o) == 1001 - m.agents);

    c.initial = InitialSpec{};
    const auto eq = initial_scaled(c);
    const auto want = overloaded_equilibrium(c.model, 0.4);
    for (std::size_t j = 0; j < 2; ++j) CHECK(eq[j] == doctest::Approx(want[j]));
}

TEST_CASE("CSV and report formatting") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);

    const auto header = header_line("abc", 7);
    CHECK(header == "# pairlim 0.1.0 config_hash=abc seed=7");

    const LimitCurve curve{{0.0, 0.5}, {{1.0, 2.0}, {3.0, 4.0}}};
    const auto csv = curve_csv(curve, {"a", "b"}, header);
    CHECK(csv == header + "\ntime,a,b\n0,1,2\n0.5,3,4\n");
    CHECK(code_of([&] { curve_csv(curve, {"a"}, header); }) == ErrorCode::DimensionMismatch);

    VerdictReport r;
    r.claim = "demo";
    r.observed = 0.5;
    r.columns = {"N", "statistic"};
    r.rows = {{100, 0.5}};
    r.add("x", 1.0);
    const auto json = report_json(r, header);
    CHECK(json.rfind("{\n  \"header\": \"# pairlim", 0) == 0);
    CHECK(json.find("\"claim\": \"demo\"") != std::string::npos);
    CHECK(table_csv(r, header) == header + "\nN,statistic\n100,0.5\n");
}

TEST_CASE("trajectory CSV has one row per grid point") {
    auto c = parse_config(kMinimal);
    c.grid_points = 6;
    const auto m = finite_model(c, c.N());
    const auto tr = simulate(m, initial_state(c, m), sim_config(c));
    const auto csv = trajectory_csv(tr, "# h");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 6);
    CHECK(csv.find("time,f_1,f_2,z\n") != std::string::npos);
    // Same config, same bytes.
    CHECK(trajectory_csv(simulate(m, initial_state(c, m), sim_config(c)), "# h") == csv);
}

TEST_CASE("claims reject unknown names and wrong regimes") {
    const auto c = parse_config(kMinimal);
    CHECK(code_of([&] { run_claim("no-such-claim", c); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { run_claim("critical-lln", c); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { run_claim("agent-vanishing", c); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { run_sweep("stationary", c); }) == ErrorCode::ConfigError);
    CHECK(is_claim("detailed-balance"));
    CHECK_FALSE(is_claim("all"));
}

TEST_CASE("cheap claims pass on small inputs") {
    auto c = parse_config(kMinimal);
    c.model = ModelParams{{1.0}, {1.0}, {1.0}, 0.0, 1.0};
    c.regime = RegimeRequest::critical();
    c.N_list = {2};
    const auto db = run_claim("detailed-balance", c);
    CHECK(db.pass);
    CHECK(db.observed <= 1e-12);

    c.regime = RegimeRequest::dynamic();
    c.model.beta = 1.0;
    c.N_list = {1};
    c.options.z_cap = 20;
    CHECK(run_claim("global-balance", c).pass);
    c.options.z_cap = 1;
    CHECK_FALSE(run_claim("global-balance", c).pass);

    c.horizon = 50.0;
    c.grid_points = 2;
    const auto eq = run_claim("equilibrium-mass", c);
    CHECK(eq.pass);
    CHECK(eq.detail("H_inf") == doctest::Approx(0.5));
}

TEST_CASE("mass-LLN sweep and its biased-limit negative control") {
    auto c = parse_config(kMinimal);
    c.N_list = {100, 400, 1600};
    c.replications = 8;
    c.horizon = 1.0;
    c.grid_points = 21;
    c.initial = InitialSpec{InitKind::Explicit, {0.45, 0.45}, 0.0, 0};
    const auto good = run_sweep("mass-lln", c);
    CHECK(good.rows.size() == 3);
    CHECK(good.pass);

    c.options.limit_shift = 0.1;
    CHECK_FALSE(run_sweep("mass-lln", c).pass);

    c.options.limit_shift = 0.0;
    c.N_list = {400};
    const auto single = run_sweep("mass-lln", c);
    CHECK(single.rows.size() == 1);
    CHECK(single.pass);
}

TEST_CASE("desk suite configs are valid") {
    const auto suite = desk_suite();
    CHECK(suite.size() == 17);
    for (const auto& sc : suite) {
        CHECK(is_claim(sc.claim));
        CHECK_NOTHROW(validate(sc.config));
        CHECK(parse_config(dump_config(sc.config)) == sc.config);
    }
}
