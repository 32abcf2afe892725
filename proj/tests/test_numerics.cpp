#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"

using namespace pseudohopf;

TEST_CASE("brent_root finds the fixed point of cos") {
    const Root r = brent_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
    CHECK(r.x == doctest::Approx(0.7390851332151607).epsilon(1e-15));
    CHECK(std::abs(r.fx) < 1e-15);
}

TEST_CASE("brent_root rejects a non-bracketing interval") {
    CHECK_THROWS_AS(brent_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), InvalidArgument);
}

TEST_CASE("brent_root accepts an endpoint root") {
    const Root r = brent_root([](double x) { return x - 2.0; }, 2.0, 5.0);
    CHECK(r.x == 2.0);
}

TEST_CASE("golden_minimize locates a parabola vertex") {
    const double x = golden_minimize([](double t) { return (t - 0.3) * (t - 0.3); }, -1.0, 2.0, 1e-10);
    CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("integrate agrees with tanh-sinh on smooth and endpoint-singular integrands") {
    boost::math::quadrature::tanh_sinh<double> ts;
    const auto smooth = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); };
    const auto singular = [](double x) { return std::sqrt(x) * std::log1p(x); };
    CHECK(integrate(smooth, 0.0, 2.0).value == doctest::Approx(ts.integrate(smooth, 0.0, 2.0)).epsilon(1e-12));
    CHECK(integrate(singular, 0.0, 1.0).value == doctest::Approx(ts.integrate(singular, 0.0, 1.0)).epsilon(1e-10));
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value ==
          doctest::Approx(std::numbers::e - 1.0).epsilon(1e-14));
}

TEST_CASE("geomspace hits both ends with a constant ratio") {
    const auto g = geomspace(1e-6, 1e-1, 11);
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 1e-6);
    CHECK(g.back() == 1e-1);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(10.0, 0.5)));
    CHECK_THROWS_AS(geomspace(0.0, 1.0, 5), InvalidArgument);
    CHECK_THROWS_AS(geomspace(1.0, 2.0, 1), InvalidArgument);
}

TEST_CASE("least_squares recovers an exact quadratic") {
    std::vector<double> design, rhs;
    for (int i = 0; i < 9; ++i) {
        const double x = 0.25 * i - 1.0;
        design.insert(design.end(), {1.0, x, x * x});
        rhs.push_back(2.0 - 3.0 * x + 0.5 * x * x);
    }
    const LinearFit fit = least_squares(design, 3, rhs);
    CHECK(fit.coeffs[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(fit.coeffs[1] == doctest::Approx(-3.0).epsilon(1e-13));
    CHECK(fit.coeffs[2] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK_THROWS_AS(least_squares(design, 4, rhs), InvalidArgument);
}

TEST_CASE("fit_line recovers slope and intercept") {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const Line l = fit_line(x, y);
    CHECK(l.slope == doctest::Approx(2.0));
    CHECK(l.intercept == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidArgument);
}
