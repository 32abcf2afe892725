#include <cmath>
#include <numbers>

#include <doctest.h>

#include "oracles.hpp"
#include "pseudohopf/error.hpp"
#include "pseudohopf/flow.hpp"
#include "pseudohopf/system.hpp"

using namespace pseudohopf;

namespace {

PlanarField upper_fold() { return {Poly2({{-1.0}}), Poly2({{0.0}, {2.0}})}; }
PlanarField lower_cubic_fold() { return {Poly2({{1.0}}), Poly2({{0.0}, {2.0}, {3.0}})}; }
PlanarField shifted_circle() { return {Poly2({{1.0, -1.0}}), Poly2({{0.0}, {1.0}})}; }
PlanarField quartic_center() { return {Poly2({{0.0, -1.0}}), Poly2({{0.0}, {0.0}, {0.0}, {1.0}})}; }

}  // namespace

TEST_CASE("parabolic fold returns to the mirror point in time 2x") {
    const SectionHit hit = flow_to_section(upper_fold(), {0.1, 0.0}, Half::Upper, Direction::Forward);
    CHECK(hit.point.x == doctest::Approx(-0.1).epsilon(1e-10));
    CHECK(hit.time == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(std::abs(hit.point.y) == 0.0);
}

TEST_CASE("lower cubic fold lands on the level-set root") {
    const SectionHit hit = flow_to_section(lower_cubic_fold(), {0.1, 0.0}, Half::Lower, Direction::Backward);
    CHECK(hit.point.x == doctest::Approx(oracle::cubic_fold_return(0.1)).epsilon(1e-10));
    CHECK(hit.time < 0.0);
}

TEST_CASE("circle around (0, 1) returns after the long arc") {
    const SectionHit hit = flow_to_section(shifted_circle(), {0.2, 0.0}, Half::Upper, Direction::Forward);
    CHECK(hit.point.x == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(hit.time == doctest::Approx(2.0 * std::numbers::pi - 2.0 * std::atan(0.2)).epsilon(1e-9));
}

TEST_CASE("quartic center flight time scales as the inverse amplitude") {
    const double Tstar = oracle::quartic_center_time();
    for (double x : {0.1, 0.01}) {
        const SectionHit hit = flow_to_section(quartic_center(), {x, 0.0}, Half::Upper, Direction::Forward);
        CHECK(hit.point.x == doctest::Approx(-x).epsilon(1e-9));
        CHECK(hit.time == doctest::Approx(Tstar / x).epsilon(1e-8));
    }
}

TEST_CASE("launch direction and caps are enforced") {
    CHECK_THROWS_AS(flow_to_section(upper_fold(), {0.1, 0.0}, Half::Lower, Direction::Forward), WrongLaunchDirection);
    CHECK_THROWS_AS(flow_to_section(upper_fold(), {0.1, 0.0}, Half::Upper, Direction::Backward),
                    WrongLaunchDirection);
    CHECK_THROWS_AS(flow_to_section(upper_fold(), {0.1, 0.1}, Half::Upper, Direction::Forward), InvalidArgument);

    IntegrationLimits short_time;
    short_time.t_max = 1.0;
    CHECK_THROWS_AS(flow_to_section(quartic_center(), {0.1, 0.0}, Half::Upper, Direction::Forward, short_time),
                    TimeCapExceeded);

    IntegrationLimits few_steps;
    few_steps.max_steps = 3;
    CHECK_THROWS_AS(flow_to_section(quartic_center(), {0.1, 0.0}, Half::Upper, Direction::Forward, few_steps),
                    StepCapExceeded);

    // A collar as tall as the arc itself is never cleared.
    IntegrationLimits wide_collar;
    wide_collar.rel_tol = 1e-3;
    wide_collar.abs_tol = 1.0;
    wide_collar.event_tol = 1.0;
    CHECK_THROWS_AS(flow_to_section(upper_fold(), {0.05, 0.0}, Half::Upper, Direction::Forward, wide_collar),
                    HalfPlaneViolation);

    IntegrationLimits bad;
    bad.event_tol = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("backward integration from the landing point retraces the arc") {
    for (const PlanarField& f : {upper_fold(), shifted_circle(), quartic_center()}) {
        const SectionHit fwd = flow_to_section(f, {0.05, 0.0}, Half::Upper, Direction::Forward);
        const SectionHit back = flow_to_section(f, fwd.point, Half::Upper, Direction::Backward);
        CHECK(back.point.x == doctest::Approx(0.05).epsilon(1e-8));
        CHECK(back.time == doctest::Approx(-fwd.time).epsilon(1e-8));
    }
}

TEST_CASE("reversible gallery sides return to the mirror point") {
    for (const char* name : {"fold_fold_sym", "nfocus_fold", "cusp_fold", "circle_orbit_fold"}) {
        const PiecewiseSystem s = make_builtin(name);
        const auto& fp = std::get<FlowProvider>(s.upper.provider);
        for (double x : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
            INFO(name << " x=" << x);
            const SectionHit hit = flow_to_section(fp.field, {x, 0.0}, Half::Upper, Direction::Forward, fp.limits);
            CHECK(std::abs(hit.point.x + x) <= 1e-7);
        }
    }
}

TEST_CASE("halving the tolerances moves the landing point by less than the coarse tolerance") {
    for (const PlanarField& f : {upper_fold(), shifted_circle(), quartic_center()}) {
        IntegrationLimits coarse;
        coarse.rel_tol = 1e-9;
        coarse.abs_tol = 1e-11;
        coarse.event_tol = 1e-11;
        IntegrationLimits fine = coarse;
        fine.rel_tol /= 2.0;
        fine.abs_tol /= 2.0;
        fine.event_tol /= 2.0;
        const double a = flow_to_section(f, {0.1, 0.0}, Half::Upper, Direction::Forward, coarse).point.x;
        const double b = flow_to_section(f, {0.1, 0.0}, Half::Upper, Direction::Forward, fine).point.x;
        CHECK(std::abs(a - b) <= 10.0 * coarse.rel_tol);
    }
}

TEST_CASE("invariant drift stays below 1e-8 on conservative fields") {
    const Poly2 H_fold({{0.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}});  // y + x^2
    const Poly2 H_quartic({{0.0, 0.0, 0.5}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.25, 0.0, 0.0}});
    for (double x : {1e-3, 1e-2, 1e-1}) {
        const Point s{x, 0.0};
        CHECK(invariant_drift(H_fold, flow_to_section(upper_fold(), s, Half::Upper, Direction::Forward), s) <= 1e-8);
        CHECK(invariant_drift(H_quartic, flow_to_section(quartic_center(), s, Half::Upper, Direction::Forward), s) <=
              1e-8);
    }
}
