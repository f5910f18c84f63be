#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "rowsim/controller.hpp"
#include "rowsim/rng.hpp"

using namespace rowsim;

TEST_CASE("center error is the signed pixel offset from w/2") {
    CHECK(center_error(112.0, 224) == 0.0);
    CHECK(center_error(0.0, 224) == -112.0);
    CHECK(center_error(168.0, 224) == 56.0);
}

TEST_CASE("raw command reproduces the hand-evaluated law") {
    ControllerConfig cfg;  // paper defaults: v_max 0.5, omega_max 1, k 0.01

    const VelocityCommand centered = raw_command(0.0, cfg);
    CHECK(centered.v == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(centered.omega == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(raw_command(112.0, cfg).v == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(raw_command(-112.0, cfg).v == doctest::Approx(0.0).epsilon(1e-12));

    const VelocityCommand mid = raw_command(56.0, cfg);
    CHECK(mid.v == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(mid.omega == doctest::Approx(-6.25e-4).epsilon(1e-12));
}

TEST_CASE("steering is odd in the error; the literal law is one-signed") {
    ControllerConfig cfg;
    const VelocityCommand pos = raw_command(56.0, cfg);
    const VelocityCommand neg = raw_command(-56.0, cfg);
    CHECK(neg.omega == doctest::Approx(-pos.omega).epsilon(1e-12));
    CHECK(neg.v == doctest::Approx(pos.v).epsilon(1e-12));

    cfg.literal_eq10 = true;
    CHECK(raw_command(-56.0, cfg).omega ==
          doctest::Approx(raw_command(56.0, cfg).omega).epsilon(1e-12));
}

TEST_CASE("commands stay inside the configured limits") {
    ControllerConfig cfg;
    cfg.k_omega = 5e4;  // force omega saturation
    Rng rng(4);
    double last_v = cfg.v_max + 1.0;
    for (double d = 0.0; d <= 140.0; d += 7.0) {
        const VelocityCommand c = raw_command(d, cfg);
        CHECK(c.v >= 0.0);
        CHECK(c.v <= cfg.v_max);
        CHECK(std::abs(c.omega) <= cfg.omega_max);
        if (d <= 112.0) CHECK(c.v < last_v);  // monotone slowdown on [0, w/2]
        last_v = c.v;
    }
    // Beyond w/2 the error is clamped.
    CHECK(raw_command(500.0, cfg).v == doctest::Approx(0.0));
    CHECK(raw_command(500.0, cfg).omega == doctest::Approx(-cfg.omega_max));
}

TEST_CASE("EMA smoothing follows the published update") {
    EmaState state;
    state.smoothed = {0.4, 0.1};
    const VelocityCommand out = smooth_command({0.5, 0.0}, state, 0.5);
    CHECK(out.v == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(out.omega == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(state.smoothed.v == doctest::Approx(0.45));

    // lambda = 1 passes the raw value through.
    EmaState fresh;
    fresh.smoothed = {0.3, -0.2};
    const VelocityCommand raw = smooth_command({0.11, 0.07}, fresh, 1.0);
    CHECK(raw.v == doctest::Approx(0.11).epsilon(1e-12));
    CHECK(raw.omega == doctest::Approx(0.07).epsilon(1e-12));
}

TEST_CASE("EMA converges geometrically to a constant input") {
    EmaState state;
    const VelocityCommand target{0.5, -0.01};
    double err = target.v;
    for (int k = 0; k < 40; ++k) {
        const VelocityCommand out = smooth_command(target, state, 0.5);
        const double new_err = std::abs(out.v - target.v);
        CHECK(new_err == doctest::Approx(0.5 * err).epsilon(1e-9));
        err = new_err;
    }
    CHECK(state.smoothed.v == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("EMA output is a convex combination") {
    Rng rng(8);
    EmaState state;
    state.smoothed = {rng.uniform(), rng.uniform(-1.0, 1.0)};
    for (int k = 0; k < 200; ++k) {
        const VelocityCommand prev = state.smoothed;
        const VelocityCommand raw{rng.uniform(), rng.uniform(-1.0, 1.0)};
        const double lambda = rng.uniform(0.01, 1.0);
        const VelocityCommand out = smooth_command(raw, state, lambda);
        REQUIRE(out.v >= std::min(prev.v, raw.v) - 1e-12);
        REQUIRE(out.v <= std::max(prev.v, raw.v) + 1e-12);
        REQUIRE(out.omega >= std::min(prev.omega, raw.omega) - 1e-12);
        REQUIRE(out.omega <= std::max(prev.omega, raw.omega) + 1e-12);
    }
}

TEST_CASE("no-passage feeds zero through the EMA") {
    EmaState state;
    state.smoothed = {0.5, 0.0};
    const VelocityCommand first = no_passage_policy(state, 0.5);
    CHECK(first.v == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(first.omega == doctest::Approx(0.0).epsilon(1e-12));

    // Repeated no-passage decays to rest.
    for (int k = 0; k < 60; ++k) no_passage_policy(state, 0.5);
    CHECK(state.smoothed.v == doctest::Approx(0.0).epsilon(1e-9));

    // Recovery after ok frames resumes toward the raw command.
    const VelocityCommand back = smooth_command({0.5, 0.0}, state, 0.5);
    CHECK(back.v > 0.2);
}

TEST_CASE("invalid controller configs are rejected") {
    ControllerConfig bad;
    bad.ema_lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ControllerConfig{};
    bad.k_omega = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ControllerConfig{};
    bad.v_max = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
