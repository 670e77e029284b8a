#include "doctest.h"

#include "lagrmc/errors.hpp"
#include "lagrmc/experiment_config.hpp"

#include <algorithm>
#include <string>

using namespace lagrmc;

namespace {
bool has_issue(const ValidationError& e, const std::string& field,
               const std::string& fragment) {
    return std::any_of(e.issues.begin(), e.issues.end(), [&](const ValidationIssue& i) {
        return i.field == field && i.constraint.find(fragment) != std::string::npos;
    });
}
} // namespace

TEST_CASE("defaults survive an empty config") {
    const auto cfg = parse_config_text("");
    CHECK(cfg.seed == 42);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.workers == 1);
    CHECK(cfg.sim.N == 50000);
    CHECK(cfg.sim.d == 2);
    CHECK(cfg.sim.domain.kind() == DomainKind::Ball);
    CHECK(cfg.sim.epsilon == 0.2);
    CHECK(cfg.sim.dt == 1e-3);
    CHECK(cfg.sim.T == 1.0);
    CHECK(cfg.sim.sigma == 1.0);
    CHECK(cfg.sim.kernel.is_zero());
    CHECK(cfg.sim.seed == 42);
    CHECK(cfg.passage.n_max == 6);
    CHECK(cfg.chaos.N_grid == std::vector<std::size_t>{500, 2000, 8000});
    CHECK(cfg.epsilon_study.epsilons == std::vector<double>{0.4, 0.2, 0.1});
}

TEST_CASE("full config round trip") {
    const char* text = R"(# experiment description
seed = 7
out = "results/run1"
workers = 4
domain = { kind = "ball", radius = 2.0, dim = 3 }
kernel = { preset = "clipped_linear", clip = 1.5 }
epsilon = 0.1
sigma = 0.5
dt = 0.002
T = 2.0
N = 1234

[initial]
position = "uniform"
margin = 0.25
velocity = "gaussian"
mean = [1.0, 0.0, -1.0]
stddev = 2.0

[simulate]
record_events = false
checkpoints = [0.5, 1.0, 2.0]

[passage-bound]
y = 1.5
beta_star = 1.25
paths = 5000
n_max = 4

[hit-rate]
seeds = 5
)";
    const auto cfg = parse_config_text(text);
    CHECK(cfg.seed == 7);
    CHECK(cfg.out_dir == "results/run1");
    CHECK(cfg.workers == 4);
    CHECK(cfg.sim.domain.kind() == DomainKind::Ball);
    CHECK(cfg.sim.domain.radius() == 2.0);
    CHECK(cfg.sim.d == 3);
    CHECK(cfg.sim.kernel.preset() == KernelPreset::ClippedLinear);
    CHECK(cfg.sim.kernel.clip() == 1.5);
    CHECK(cfg.sim.epsilon == 0.1);
    CHECK(cfg.sim.sigma == 0.5);
    CHECK(cfg.sim.N == 1234);
    CHECK(cfg.sim.initial.beta_star == 0.25);
    CHECK(cfg.sim.initial.vel_mean == std::vector<double>{1.0, 0.0, -1.0});
    CHECK(cfg.sim.initial.vel_stddev == 2.0);
    CHECK_FALSE(cfg.simulate.record_events);
    CHECK(cfg.simulate.checkpoints == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(cfg.passage.y == 1.5);
    CHECK(cfg.passage.beta_star == 1.25);
    CHECK(cfg.passage.paths == 5000);
    CHECK(cfg.passage.n_max == 4);
    CHECK(cfg.hit_rate.seeds == 5);
    // Engine copies pick up the top-level seed/worker settings.
    CHECK(cfg.sim.seed == 7);
    CHECK(cfg.sim.workers == 4);
}

TEST_CASE("interval and halfspace domains parse") {
    const auto iv = parse_config_text("domain = { kind = \"interval\", length = 3.0 }\n");
    CHECK(iv.sim.domain.kind() == DomainKind::Interval);
    CHECK(iv.sim.domain.length() == 3.0);
    CHECK(iv.sim.d == 1);
    const auto hs = parse_config_text("domain = { kind = \"halfspace\", dim = 2 }\n");
    CHECK(hs.sim.domain.kind() == DomainKind::HalfSpace);
}

TEST_CASE("syntax errors carry position") {
    try {
        parse_config_text("dt = = 3\n", "bad.toml");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.col > 1);
        CHECK(std::string(e.what()).find("bad.toml:1:") != std::string::npos);
    }
    try {
        parse_config_text("seed = 1\nxyz\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_config_text("s = \"unterminated\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("a = [1, 2\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("[initial\n"), ParseError);
}

TEST_CASE("all semantic problems are reported together") {
    try {
        parse_config_text("dt = 0.0\nsigma = -1.0\nepsilonn = 0.2\nN = 0\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.issues.size() == 4);
        CHECK(has_issue(e, "dt", "> 0"));
        CHECK(has_issue(e, "sigma", ">= 0"));
        CHECK(has_issue(e, "N", ">= 1"));
        // Unknown keys come with a nearest-known-key suggestion.
        CHECK(has_issue(e, "epsilonn", "did you mean 'epsilon'"));
        CHECK(std::string(e.what()).find("4 problems") != std::string::npos);
    }
}

TEST_CASE("type mismatches and structural checks") {
    CHECK_THROWS_AS(parse_config_text("dt = \"fast\"\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("seed = -4\n"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("[unknown-section]\nx = 1\n"), ValidationError);
    CHECK_THROWS_AS(
        parse_config_text("domain = { kind = \"ball\", radius = -1.0, dim = 2 }\n"),
        ValidationError);
    CHECK_THROWS_AS(parse_config_text("kernel = { preset = \"nope\" }\n"),
                    ValidationError);
    // Integer is acceptable where a float is expected.
    const auto ok = parse_config_text("dt = 1\nT = 2\n");
    CHECK(ok.sim.dt == 1.0);
    CHECK(ok.sim.T == 2.0);
    // Mismatched drift-consistency schedules.
    CHECK_THROWS_AS(parse_config_text("[drift-consistency]\nschedule_N = [100, 1000]\n"
                                      "schedule_epsilon = [0.4]\n"),
                    ValidationError);
    // Checkpoints must sit inside [0, T].
    CHECK_THROWS_AS(parse_config_text("T = 1.0\n[simulate]\ncheckpoints = [0.5, 2.0]\n"),
                    ValidationError);
}

TEST_CASE("initial law point variants") {
    const auto cfg = parse_config_text(
        "domain = { kind = \"ball\", radius = 1.0, dim = 2 }\n"
        "[initial]\n"
        "position = \"point\"\n"
        "point = [0.1, 0.2]\n"
        "velocity = \"point\"\n"
        "vel_point = [1.0, -1.0]\n");
    CHECK(cfg.sim.initial.pos_kind == InitialLawSpec::PosKind::Point);
    CHECK(cfg.sim.initial.pos_point == std::vector<double>{0.1, 0.2});
    CHECK(cfg.sim.initial.vel_kind == InitialLawSpec::VelKind::Point);
    CHECK(cfg.sim.initial.vel_point == std::vector<double>{1.0, -1.0});
    // Dimension mismatch is a validation problem.
    CHECK_THROWS_AS(parse_config_text("domain = { kind = \"ball\", radius = 1.0, dim = 2 }\n"
                                      "[initial]\nposition = \"point\"\npoint = [0.1]\n"),
                    ValidationError);
}

TEST_CASE("comments, whitespace, escapes") {
    const auto cfg = parse_config_text(
        "  # full-line comment\n"
        "\n"
        "seed = 9   # trailing comment\n"
        "out = \"a\\\"b\\\\c\"\n");
    CHECK(cfg.seed == 9);
    CHECK(cfg.out_dir == "a\"b\\c");
}
