#include <doctest.h>

#include <algorithm>
#include <string>

#include "ndextrap/config.hpp"

using namespace ndextrap;

namespace {

const char* kMinimal = R"({
  "grid": [16, 16],
  "support": {"half_bandwidth": [2, 2]},
  "regions": [{"corner": [0, 0], "extent": [8, 8]}]
})";

const char* kFull = R"({
  "grid": [64, 64],
  "support": {"half_bandwidth": [4, 4]},
  "regions": [{"corner": [2, 2], "extent": [16, 16]}, {"corner": [34, 34], "extent": [16, 16]}],
  "weights": {"mode": "explicit", "values": [0.25, 0.75]},
  "mode": "regularized",
  "regularization": {"mu": 0.005, "tau": 1.9702970297029703},
  "synthesis": {"seed": 7, "rms": 2.0,
                "noise": {"snr_db": 6.9, "mode": "spectral", "bumps": 32, "width_min": 1.0,
                          "width_max": 3.0, "amplitude": 0.01}},
  "run": {"max_iters": 500, "residual_tol": 1e-12, "record_every": 5},
  "eigen": {"count": 6, "tol": 1e-9, "order": 2},
  "output": {"directory": "out", "pgm": true}
})";

std::vector<ConfigIssue> issues_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool has_issue(const std::string& text, const std::string& path) {
    const auto issues = issues_of(text);
    return std::any_of(issues.begin(), issues.end(), [&](const ConfigIssue& i) { return i.path == path; });
}

std::string with(const std::string& base, const std::string& from, const std::string& to) {
    std::string s = base;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    s.replace(pos, from.size(), to);
    return s;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config gets defaults") {
    const auto c = parse_config(kMinimal);
    CHECK(c.grid == std::vector<std::size_t>{16, 16});
    CHECK(c.regions.size() == 1);
    CHECK(c.weights.mode == WeightMode::uniform);
    CHECK(c.mode == RunMode::unregularized);
    CHECK_FALSE(c.regularization.has_value());
    CHECK(c.synthesis.seed == 1);
    CHECK(c.synthesis.noise_seed() == 2);
    CHECK(c.max_iters == 1000);
    CHECK(c.record_every == 1);
    CHECK(c.output.directory == ".");
}

TEST_CASE("small supports clamp the default eigen count") {
    const auto c = parse_config(with(kMinimal, "[2, 2]", "[0, 1]"));
    CHECK(c.eigen.count == 3);
}

TEST_CASE("full config parses every field") {
    const auto c = parse_config(kFull);
    CHECK(c.weights.mode == WeightMode::explicit_values);
    CHECK(c.weights.values == std::vector<double>{0.25, 0.75});
    CHECK(c.mode == RunMode::regularized);
    CHECK(c.regularization->mu == 0.005);
    CHECK(c.synthesis.rms == 2.0);
    REQUIRE(c.synthesis.noise.has_value());
    CHECK(c.synthesis.noise->params.mode == NoiseMode::spectral);
    CHECK(c.synthesis.noise->params.bump_count == 32);
    CHECK(c.record_every == 5);
    CHECK(c.eigen.order == 2);
    CHECK(c.output.pgm);
    const RunConfig rc = c.run_config();
    CHECK(rc.mode == RunMode::regularized);
    CHECK(rc.max_iters == 500);
    CHECK_NOTHROW(rc.validate());
}

TEST_CASE("parse, serialize, parse is idempotent") {
    for (const char* text : {kMinimal, kFull}) {
        const std::string once = to_json(parse_config(text));
        const std::string twice = to_json(parse_config(once));
        CHECK(once == twice);
    }
    const std::string suggested = with(kMinimal, "\"regions\"", "\"weights\": {\"mode\": \"suggested\", \"order\": 3},\n  \"regions\"");
    CHECK(to_json(parse_config(suggested)) == to_json(parse_config(to_json(parse_config(suggested)))));
}

TEST_CASE("weights summing to 1.1 are reported at the weights path") {
    const std::string bad = with(kFull, "[0.25, 0.75]", "[0.6, 0.5]");
    CHECK(has_issue(bad, "$.weights.values"));
}

TEST_CASE("tau at the open bound is rejected") {
    const std::string bad = with(kFull, "1.9702970297029703", "1.9801980198019802");
    CHECK(has_issue(bad, "$.regularization.tau"));
    CHECK(has_issue(with(kFull, "\"mu\": 0.005", "\"mu\": 0"), "$.regularization.mu"));
}

TEST_CASE("strict schema") {
    CHECK(has_issue(with(kMinimal, "\"grid\"", "\"gird\": 1, \"grid\""), "$.gird"));
    CHECK(has_issue(with(kFull, "\"pgm\": true", "\"pgm\": true, \"png\": 1"), "$.output.png"));
    CHECK(has_issue(with(kFull, "\"bumps\": 32", "\"bumps\": 32, \"sigma\": 1"), "$.synthesis.noise.sigma"));
    CHECK(has_issue("{", "$"));
    CHECK(has_issue("[]", "$"));
    CHECK(has_issue("{}", "$.grid"));
    CHECK(has_issue("{}", "$.support"));
    CHECK(has_issue("{}", "$.regions"));
}

TEST_CASE("invalid combinations cite the offending path") {
    CHECK(has_issue(with(kFull, "\"mode\": \"regularized\"", "\"mode\": \"unregularized\""), "$.regularization"));
    CHECK(has_issue(with(kMinimal, "\"grid\"", "\"mode\": \"regularized\", \"grid\""), "$.regularization"));
    CHECK(has_issue(with(kMinimal, "\"extent\": [8, 8]", "\"extent\": [8, 20]"), "$.regions[0]"));
    CHECK(has_issue(with(kMinimal, "[2, 2]", "[8, 2]"), "$.support.half_bandwidth"));
    CHECK(has_issue(with(kMinimal, "[16, 16]", "[16, -1]"), "$.grid[1]"));
    CHECK(has_issue(with(kFull, "\"count\": 6", "\"count\": 100"), "$.eigen.count"));
    CHECK(has_issue(with(kFull, "\"order\": 2", "\"order\": 6"), "$.eigen.order"));
    CHECK(has_issue(with(kFull, "\"max_iters\": 500", "\"max_iters\": 0"), "$.run.max_iters"));
    CHECK(has_issue(with(kFull, "\"width_min\": 1.0", "\"width_min\": 5.0"), "$.synthesis.noise.width_min"));
    CHECK(has_issue(with(kFull, "\"rms\": 2.0", "\"rms\": -2.0"), "$.synthesis.rms"));
    CHECK(has_issue(with(kFull, "[0.25, 0.75]", "[0.25, 0.75, 0.0]"), "$.weights.values"));
    const std::string one_d = R"({"grid": [16], "support": {"half_bandwidth": [2]},
        "regions": [{"corner": [0], "extent": [4]}], "output": {"pgm": true}})";
    CHECK(has_issue(one_d, "$.output.pgm"));
}

TEST_CASE("all problems are collected at once") {
    const std::string bad = with(with(kFull, "[0.25, 0.75]", "[0.6, 0.5]"), "1.9702970297029703", "3.0");
    const auto issues = issues_of(bad);
    CHECK(issues.size() >= 2);
}

}  // TEST_SUITE
