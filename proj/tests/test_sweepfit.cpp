#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "pseudohopf/error.hpp"
#include "pseudohopf/sweepfit.hpp"

using namespace pseudohopf;

namespace {

std::vector<Sample> synth(const std::function<double(double)>& f, const Grid& g = {}) {
    std::vector<Sample> out;
    for (double m : g.magnitudes()) out.push_back({-m, f(m)});
    return out;
}

}  // namespace

TEST_CASE("grid magnitudes") {
    const auto m = Grid{}.magnitudes();
    REQUIRE(m.size() == 20);
    CHECK(m.front() == 1e-2);
    CHECK(m[1] == doctest::Approx(5e-3));
    CHECK_THROWS_AS((Grid{1e-2, 1.5, 10}.validate()), InvalidArgument);
    CHECK_THROWS_AS((Grid{-1.0, 0.5, 10}.validate()), InvalidArgument);
}

TEST_CASE("fit_power on exact laws") {
    for (double lambda : {0.25, 0.5, 0.8, 1.0, 2.0})
        for (double c : {0.5, 1.0, std::numbers::sqrt2}) {
            const FitResult f = fit_power(synth([=](double b) { return c * std::pow(b, lambda); }));
            CHECK(f.law.exponent == doctest::Approx(lambda).epsilon(1e-6));
            CHECK(f.law.coefficient == doctest::Approx(c).epsilon(1e-6));
            CHECK(f.law.family == LawFamily::Power);
        }
    const FitResult neg = fit_power(synth([](double b) { return 3.7 * std::pow(b, -0.5); }));
    CHECK(neg.law.family == LawFamily::NegPower);
    CHECK(neg.law.exponent == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(neg.law.coefficient == doctest::Approx(3.7).epsilon(1e-6));
    CHECK(neg.window.first == doctest::Approx(Grid{}.magnitudes().back()));
    CHECK(neg.window.second == doctest::Approx(1e-2));

    CHECK_THROWS_AS(fit_power(synth([](double) { return -1.0; })), InvalidArgument);
    CHECK_THROWS_AS(fit_power(synth([](double b) { return b; }, Grid{1e-2, 0.5, 5})), InvalidArgument);
}

TEST_CASE("fit_log on exact and constant data") {
    const FitResult l = fit_log(synth([](double b) { return -0.8 * std::log(b) + 0.3; }));
    CHECK(l.law.family == LawFamily::Log);
    CHECK(l.law.coefficient == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(l.law.offset == doctest::Approx(0.3).epsilon(1e-12));

    const auto flat = synth([](double) { return 2.0; });
    CHECK(std::abs(fit_log(flat).law.coefficient) < 1e-12);
    const FitResult c = fit_constant(flat);
    CHECK(c.law.family == LawFamily::Constant);
    CHECK(c.law.coefficient == 2.0);
    CHECK(c.max_rel_residual <= 1e-15);
}

TEST_CASE("fit_constant extrapolates and rejects divergence") {
    const FitResult f = fit_constant(synth([](double b) { return 2.0 * std::numbers::pi + 3.0 * std::sqrt(b); }));
    CHECK(f.law.coefficient == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-8));
    CHECK(f.law.exponent == doctest::Approx(0.5).epsilon(1e-4));
    CHECK_THROWS_AS(fit_constant(synth([](double b) { return 1.0 + std::sin(1.0 / std::sqrt(b)); })),
                    NumericalError);
}

TEST_CASE("classify_law examples") {
    CHECK(classify_law(synth([](double b) { return std::sqrt(b); })).law.family == LawFamily::Power);
    CHECK(classify_law(synth([](double b) { return -std::log(b); })).law.family == LawFamily::Log);
    CHECK(classify_law(synth([](double b) { return 2.0 * std::numbers::pi + b; })).law.family ==
          LawFamily::Constant);
    CHECK_THROWS_AS(classify_law(synth([](double b) { return b; }, Grid{1e-2, 0.8, 12})), InvalidArgument);
}

TEST_CASE("classify_law under 0.1% noise") {
    struct Family {
        LawFamily family;
        std::function<double(double)> f;
    };
    const std::vector<Family> families{
        {LawFamily::Power, [](double b) { return std::sqrt(b); }},
        {LawFamily::NegPower, [](double b) { return 1.0 / std::sqrt(b); }},
        {LawFamily::Log, [](double b) { return -0.8 * std::log(b) + 0.3; }},
        {LawFamily::Constant, [](double b) { return 2.0 * std::numbers::pi + 3.0 * std::sqrt(b); }},
    };
    for (const Family& fam : families) {
        std::mt19937_64 rng(20261016);
        std::normal_distribution<double> noise(0.0, 1e-3);
        int hits = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto s = synth([&](double b) { return fam.f(b) * (1.0 + noise(rng)); });
            try {
                if (classify_law(s).law.family == fam.family) ++hits;
            } catch (const Error&) {
            }
        }
        INFO(to_string(fam.family));
        CHECK(hits >= 95);
    }
}

TEST_CASE("compare examples") {
    AsymptoticLaw pred;
    pred.coefficient = std::numbers::sqrt2;
    pred.exponent = 0.5;
    FitResult fit;
    fit.law.coefficient = 1.42;
    fit.law.exponent = 0.501;
    CHECK(compare(pred, fit, {0.02, 0.02}).pass);

    fit.law.family = LawFamily::Log;
    const Verdict mismatch = compare(pred, fit);
    CHECK_FALSE(mismatch.pass);
    CHECK(mismatch.details.find("family") != std::string::npos);

    pred.coefficient = 1.0;
    pred.exponent = 0.8;
    fit.law.family = LawFamily::Power;
    fit.law.coefficient = 1.01;
    fit.law.exponent = 0.79;
    CHECK(compare(pred, fit).pass);
    fit.law.exponent = 0.75;
    CHECK_FALSE(compare(pred, fit).pass);
}

TEST_CASE("asymptotic_window keeps the smallest |b|") {
    const auto s = synth([](double b) { return b; });
    const auto w = asymptotic_window(s, 0.5);
    REQUIRE(w.size() == 10);
    CHECK(w.front().b == s[10].b);
    CHECK(asymptotic_window(s, 0.01).size() == 1);
    CHECK_THROWS_AS(asymptotic_window(s, 0.0), InvalidArgument);
}

TEST_CASE("sweep examples") {
    const PiecewiseSystem ff = make_builtin("fold_fold_broken");
    const SweepResult r = sweep(ff);
    CHECK(r.sign == -1);
    REQUIRE(r.samples.size() == 20);
    CHECK(r.failures.empty());
    for (std::size_t i = 1; i < r.samples.size(); ++i) CHECK(r.samples[i].x_star < r.samples[i - 1].x_star);
    CHECK_NOTHROW(r.require_successes());

    const SweepResult flipped = sweep(ff, {}, 1);
    CHECK(flipped.samples.empty());
    REQUIRE(flipped.failures.size() == 20);
    for (const auto& f : flipped.failures) CHECK(f.kind == "no_sign_change");
    CHECK_THROWS_AS(flipped.require_successes(), NumericalError);

    // Building the system and its sign probes need long flights, so the cap is applied afterwards.
    PiecewiseSystem capped = make_builtin("nfocus_fold");
    const int mu = sign_data(capped).mu;
    std::get<FlowProvider>(capped.upper.provider).limits.t_max = 1000.0;
    const SweepResult nf = sweep(capped, {}, mu);
    CHECK_FALSE(nf.failures.empty());
    CHECK_FALSE(nf.samples.empty());
    for (const auto& f : nf.failures) {
        CHECK(f.kind == "time_cap_exceeded");
        CHECK(std::abs(f.b) < std::abs(nf.samples.back().b));
    }
}

TEST_CASE("sweep results do not depend on the worker count") {
    const PiecewiseSystem s = make_builtin("efocus_fold");
    const Grid g{1e-2, 0.5, 8};
    const SweepResult one = sweep(s, g, {}, 1), many = sweep(s, g, {}, 4);
    REQUIRE(one.samples.size() == many.samples.size());
    for (std::size_t i = 0; i < one.samples.size(); ++i) {
        CHECK(one.samples[i].x_star == many.samples[i].x_star);
        CHECK(one.samples[i].period == many.samples[i].period);
    }
}

TEST_CASE("worker_count honors the environment") {
    ::setenv("PSEUDOHOPF_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    ::setenv("PSEUDOHOPF_THREADS", "zero", 1);
    CHECK_THROWS_AS(worker_count(), ConfigError);
    ::unsetenv("PSEUDOHOPF_THREADS");
    CHECK(worker_count() >= 1);
}

TEST_CASE("shrinking the fit window moves the exponent toward the prediction") {
    for (const char* name : {"fold_fold_broken", "efocus_fold", "nfocus_fold", "circle_orbit_fold",
                             "model_polycycle_fold", "model_polycycle_polycycle"}) {
        const PiecewiseSystem s = make_builtin(name);
        const SystemPrediction pred = predict_system(s);
        REQUIRE(pred.position);
        const auto pos = position_samples(sweep(s));
        const double full = fit_power(pos).law.exponent;
        const double half = fit_power(asymptotic_window(pos, 0.5)).law.exponent;
        const double target = pred.position->exponent;
        INFO(name << " full " << full << " half " << half << " predicted " << target);
        CHECK((std::abs(half - target) <= std::abs(full - target) + 1e-9 || std::abs(half - target) <= 0.02));
    }
}
