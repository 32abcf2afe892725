#include <cmath>
#include <numbers>

#include <doctest.h>

#include "oracles.hpp"
#include "pseudohopf/bifurcation.hpp"
#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"

using namespace pseudohopf;

namespace {

// Root of the unperturbed-plus-shift displacement for fold_fold_broken by plain
// bisection on returns computed from the level-set oracles.
double fold_fold_cycle_oracle(double b) {
    const auto delta = [b](double x) { return -((b - x) + b - oracle::cubic_fold_return(x)); };
    double lo = std::max(0.0, b) + 1e-6, hi = 0.2;
    const int s_lo = sign_of(delta(lo));
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (sign_of(delta(mid)) == s_lo) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

SectionHit either_direction(const PlanarField& f, Point start, Half h, const IntegrationLimits& lim) {
    try {
        return flow_to_section(f, start, h, Direction::Forward, lim);
    } catch (const WrongLaunchDirection&) {
        return flow_to_section(f, start, h, Direction::Backward, lim);
    }
}

}  // namespace

TEST_CASE("orientation_sign") {
    CHECK(orientation_sign(-1.0, 2.0) == 1);
    CHECK(orientation_sign(1.0, -2.0) == -1);
}

TEST_CASE("sign_data examples") {
    const SignTriple ff = sign_data(make_builtin("fold_fold_broken"));
    CHECK(ff.delta == -1);
    CHECK(ff.sigma == -1);
    CHECK(ff.mu == -1);
    CHECK_THROWS_AS(sign_data(make_builtin("fold_fold_sym")), DegenerateSigns);
    CHECK_THROWS_AS(sign_data(make_builtin("efocus_efocus")), DegenerateSigns);
    const SignTriple pp = sign_data(make_builtin("model_polycycle_polycycle"));
    CHECK(pp.mu == -pp.sigma * pp.delta);
}

TEST_CASE("displacement examples") {
    CHECK(std::abs(displacement(make_builtin("fold_fold_sym"), 0.1, 0.0)) <= 1e-8);
    const PiecewiseSystem ff = make_builtin("fold_fold_broken");
    CHECK(displacement(ff, 0.1, 0.0) == doctest::Approx(0.1 + oracle::cubic_fold_return(0.1)).epsilon(1e-8));
    CHECK_THROWS_AS(displacement(ff, 0.5, 0.0), InvalidArgument);

    const PiecewiseSystem pf = make_builtin("model_polycycle_fold", {{"r", 0.7}});
    const int delta = sign_data(pf).delta;
    CHECK(displacement(pf, 0.2, 0.0) == doctest::Approx(delta * (-std::pow(0.2, 0.7) + 0.2)).epsilon(1e-14));
}

TEST_CASE("find_crossing_cycle on the broken fold pair") {
    const PiecewiseSystem ff = make_builtin("fold_fold_broken");
    const CycleSearch found = find_crossing_cycle(ff, -0.0005);
    REQUIRE(found.outcome == CycleOutcome::Found);
    const CycleRecord& r = *found.record;
    CHECK(r.x_star == doctest::Approx(fold_fold_cycle_oracle(-0.0005)).epsilon(1e-8));
    CHECK(r.x_star == doctest::Approx(std::sqrt(0.001)).epsilon(0.05));
    CHECK(r.stability == Stability::Stable);
    CHECK(r.upper_entry == doctest::Approx(r.x_star + 0.0005));
    CHECK(r.period == doctest::Approx(4.0 * r.x_star).epsilon(0.02));
    CHECK(r.period == doctest::Approx(cycle_period(ff, -0.0005, r.x_star)).epsilon(1e-12));

    const CycleSearch none = find_crossing_cycle(ff, 0.0005);
    CHECK(none.outcome == CycleOutcome::NoSignChange);
    CHECK_FALSE(none.record.has_value());
}

TEST_CASE("find_crossing_cycle on the model polycycle pair matches a direct root") {
    const PiecewiseSystem pp = make_builtin("model_polycycle_polycycle");
    const double b = 1e-4;
    const int mu = sign_data(pp).mu;
    const CycleSearch s = find_crossing_cycle(pp, mu * b);
    REQUIRE(s.outcome == CycleOutcome::Found);
    // -(x - b')^1.4 + b' + x^1.25 = 0 with b' = mu * b.
    const double bb = mu * b;
    const auto g = [bb](double x) { return -std::pow(x - bb, 1.4) + bb + std::pow(x, 1.25); };
    const double direct = brent_root(g, std::max(0.0, bb) + 1e-12, 0.4).x;
    CHECK(s.record->x_star == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("closed orbit self-consistency by direct re-integration") {
    for (const char* name : {"fold_fold_broken", "nfocus_fold"}) {
        const PiecewiseSystem s = make_builtin(name);
        const double b = sign_data(s).mu * 1e-3;
        const CycleRecord r = *find_crossing_cycle(s, b).record;
        const auto& up = std::get<FlowProvider>(s.upper.provider);
        const auto& lo = std::get<FlowProvider>(s.lower.provider);
        // Upper arc in its own frame, then the lower arc back from the landing point.
        const SectionHit a = either_direction(up.field, {r.upper_entry, 0.0}, Half::Upper, up.limits);
        const SectionHit c = either_direction(lo.field, {a.point.x + b, 0.0}, Half::Lower, lo.limits);
        INFO(name);
        CHECK(std::abs(c.point.x - r.x_star) <= 1e-6 * std::max(1.0, r.x_star));
        CHECK(std::abs(a.time) + std::abs(c.time) == doctest::Approx(r.period).epsilon(1e-8));
    }
}

TEST_CASE("sliding segment attractivity opposes the cycle side") {
    const PiecewiseSystem ff = make_builtin("fold_fold_broken");
    const SlidingSegment rep = sliding_segment(ff, -0.0005);
    CHECK(rep.attractivity == Attractivity::Repelling);
    CHECK(rep.lo == -0.0005);
    CHECK(rep.hi == 0.0);
    CHECK(sliding_segment(ff, 0.0005).attractivity == Attractivity::Attracting);
    CHECK_THROWS_AS(sliding_segment(ff, 0.0), InvalidArgument);
}

TEST_CASE("cycle stability follows the sign of the leading displacement") {
    for (const char* name : {"fold_fold_broken", "efocus_fold", "nfocus_fold", "model_polycycle_fold"}) {
        const PiecewiseSystem s = make_builtin(name);
        const SignTriple t = sign_data(s);
        INFO(name);
        for (double m : {1e-3, 1e-5}) {
            const CycleSearch c = find_crossing_cycle(s, t.mu * m);
            REQUIRE(c.outcome == CycleOutcome::Found);
            CHECK(c.record->stability == (t.sigma < 0 ? Stability::Stable : Stability::Unstable));
            CHECK(c.record->x_star > std::max(0.0, t.mu * m));
        }
    }
}

TEST_CASE("leading displacement coefficient of the broken fold pair") {
    const PiecewiseSystem ff = make_builtin("fold_fold_broken");
    const auto V = displacement_series(ff, geomspace(1e-4, 2e-2, 12), 2, 3);
    CHECK(V[0] == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("existence dichotomy on a short grid") {
    for (const char* name : {"fold_fold_broken", "efocus_fold", "cusp_fold", "circle_orbit_fold"}) {
        const PiecewiseSystem s = make_builtin(name);
        const int mu = sign_data(s).mu;
        INFO(name);
        for (double m : {1e-2, 1e-4, 1e-6}) {
            CHECK(find_crossing_cycle(s, mu * m).outcome == CycleOutcome::Found);
            CHECK(find_crossing_cycle(s, -mu * m).outcome == CycleOutcome::NoSignChange);
        }
    }
}
