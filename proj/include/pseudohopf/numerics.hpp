#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace pseudohopf {

struct RootOptions {
    double x_tol = 0.0;  // absolute bracket width; 0 means machine resolution
    double f_tol = 0.0;  // stop once |f| <= f_tol
    int max_iter = 200;
};

struct Root {
    double x = 0.0;
    double fx = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int iterations = 0;
};

// Bracketed root by bisection with inverse quadratic interpolation.
// Requires f(a) and f(b) of opposite sign (or one of them zero).
Root brent_root(const std::function<double(double)>& f, double a, double b,
                double fa, double fb, const RootOptions& opt = {});
Root brent_root(const std::function<double(double)>& f, double a, double b,
                const RootOptions& opt = {});

// Minimize a unimodal function on [a, b].
double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double x_tol = 1e-10, int max_iter = 200);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 1e-14, int max_subdivisions = 2000);

// n points a, a*q, ..., geometric between a and b inclusive (both > 0).
std::vector<double> geomspace(double a, double b, int n);

struct LinearFit {
    std::vector<double> coeffs;  // least-squares solution
    std::vector<double> residuals;
    double r_squared = 0.0;
};

// Least squares for design matrix rows (row-major, cols columns).
LinearFit least_squares(std::span<const double> design, int cols, std::span<const double> rhs);

// Straight line y = intercept + slope*x.
struct Line {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;
};
Line fit_line(std::span<const double> x, std::span<const double> y);

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace pseudohopf
