#pragma once

// Dormand-Prince 5(4) embedded pair with the classic 4th-order continuous
// extension. Fixed-size state, forward direction only (callers flip the
// vector field for backward time).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "pseudohopf/error.hpp"

namespace pseudohopf::rk {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
using Rhs = std::function<void(double t, const State<N>& u, State<N>& du)>;

template <std::size_t N>
struct Tolerances {
    double rel = 1e-10;
    State<N> abs{};
};

// Continuous extension over one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::array<State<N>, 5> rc{};

    State<N> at(double t) const {
        const double s = (t - t0) / h, s1 = 1.0 - s;
        State<N> out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = rc[0][i] + s * (rc[1][i] + s1 * (rc[2][i] + s * (rc[3][i] + s1 * rc[4][i])));
        return out;
    }
};

namespace coef {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace coef

struct StepOutcome {
    double error_norm = 0.0;
};

// One trial step of size h from (t, u) with k1 = f(t, u). Writes the 5th-order
// solution, the last stage (FSAL) and optionally the dense coefficients.
template <std::size_t N>
StepOutcome dp5_step(const Rhs<N>& f, const Tolerances<N>& tol, double t, const State<N>& u,
                     const State<N>& k1, double h, State<N>& u_new, State<N>& k7,
                     DenseStep<N>* dense) {
    using namespace coef;
    State<N> k2, k3, k4, k5, k6, tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = u[i] + h * a21 * k1[i];
    f(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = u[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = u[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = u[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = u[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
        u_new[i] = u[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(t + h, u_new, k7);

    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = tol.abs[i] + tol.rel * std::max(std::abs(u[i]), std::abs(u_new[i]));
        sum += (err / sc) * (err / sc);
    }
    if (dense) {
        dense->t0 = t;
        dense->h = h;
        for (std::size_t i = 0; i < N; ++i) {
            const double diff = u_new[i] - u[i];
            const double bspl = h * k1[i] - diff;
            dense->rc[0][i] = u[i];
            dense->rc[1][i] = diff;
            dense->rc[2][i] = bspl;
            dense->rc[3][i] = diff - h * k7[i] - bspl;
            dense->rc[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
    }
    const double norm = std::sqrt(sum / static_cast<double>(N));
    return {std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity()};
}

// Adaptive forward integrator that exposes each accepted step.
template <std::size_t N>
class Stepper {
public:
    Stepper(Rhs<N> f, double t0, const State<N>& u0, Tolerances<N> tol, double h_max)
        : f_(std::move(f)), tol_(tol), t_(t0), u_(u0), h_max_(h_max) {
        f_(t_, u_, k1_);
        h_ = initial_step();
    }

    // Advance by one accepted step, never past t_stop. Returns false when a
    // step size underflow is detected.
    bool advance(double t_stop) {
        State<N> u_new, k7;
        for (int tries = 0; tries < 60; ++tries) {
            double h = std::min(h_, h_max_);
            bool last = false;
            if (t_ + h >= t_stop) {
                h = t_stop - t_;
                last = true;
            }
            if (!(h > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_))))
                return false;
            const StepOutcome out = dp5_step<N>(f_, tol_, t_, u_, k1_, h, u_new, k7, &dense_);
            const double err = out.error_norm;
            if (err <= 1.0) {
                t_ = last ? t_stop : t_ + h;
                u_ = u_new;
                k1_ = k7;
                const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                h_ = h * std::clamp(fac, 0.2, 5.0);
                ++accepted_;
                return true;
            }
            const double fac = std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.1;
            h_ = h * std::clamp(fac, 0.1, 0.9);
        }
        return false;
    }

    double t() const { return t_; }
    const State<N>& u() const { return u_; }
    const State<N>& slope() const { return k1_; }
    const DenseStep<N>& dense() const { return dense_; }
    int accepted() const { return accepted_; }
    const Rhs<N>& rhs() const { return f_; }
    const Tolerances<N>& tolerances() const { return tol_; }

private:
    double initial_step() const {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol_.abs[i] + tol_.rel * std::abs(u_[i]);
            d0 += (u_[i] / sc) * (u_[i] / sc);
            d1 += (k1_[i] / sc) * (k1_[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, h_max_);
        State<N> u1, k2;
        for (std::size_t i = 0; i < N; ++i) u1[i] = u_[i] + h0 * k1_[i];
        f_(t_ + h0, u1, k2);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = tol_.abs[i] + tol_.rel * std::abs(u_[i]);
            d2 += ((k2[i] - k1_[i]) / sc) * ((k2[i] - k1_[i]) / sc);
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        return std::min({100.0 * h0, h1, h_max_});
    }

    Rhs<N> f_;
    Tolerances<N> tol_;
    double t_;
    State<N> u_;
    State<N> k1_{};
    double h_ = 0.0;
    double h_max_;
    DenseStep<N> dense_{};
    int accepted_ = 0;
};

// Integrate from t0 to t1 (t1 > t0) and return the end state.
template <std::size_t N>
State<N> solve(const Rhs<N>& f, double t0, double t1, const State<N>& u0, const Tolerances<N>& tol,
               int max_steps = 1000000) {
    Stepper<N> st(f, t0, u0, tol, t1 - t0);
    while (st.t() < t1) {
        if (st.accepted() >= max_steps) throw StepCapExceeded("rk::solve: step cap reached");
        if (!st.advance(t1)) throw NumericalError("rk::solve: step size underflow");
    }
    return st.u();
}

}  // namespace pseudohopf::rk
