#include "pseudohopf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"
#include "pseudohopf/rk.hpp"

namespace pseudohopf {

void IntegrationLimits::validate() const {
    if (!(rel_tol > 0.0 && abs_tol > 0.0 && t_max > 0.0 && event_tol > 0.0 && max_steps > 0))
        throw InvalidArgument("integration limits must all be positive");
    if (event_tol > abs_tol) throw InvalidArgument("event_tol must not exceed abs_tol");
}

namespace {

using State = rk::State<2>;

std::string where(Point p) { return " (start x = " + std::to_string(p.x) + ")"; }

}  // namespace

SectionHit flow_to_section(const PlanarField& field, Point start, Half half, Direction direction,
                           const IntegrationLimits& limits) {
    limits.validate();
    if (start.y != 0.0) throw InvalidArgument("flow_to_section: start must lie on y = 0");
    const double hs = half == Half::Upper ? 1.0 : -1.0;
    const double ds = direction == Direction::Forward ? 1.0 : -1.0;
    const double q0 = field.Q()(start);
    if (!(q0 * hs * ds > 0.0))
        throw WrongLaunchDirection("field does not push into the requested half-plane" + where(start));

    const double s = start.x != 0.0 ? std::min(1.0, std::abs(start.x)) : 1.0;
    const double s2 = s * s;
    const double ev_arm = limits.event_tol * s2;

    rk::Tolerances<2> tol;
    tol.rel = limits.rel_tol;
    tol.abs = {limits.abs_tol * s, limits.abs_tol * s2};
    const rk::Rhs<2> rhs = [&field, ds](double, const State& u, State& du) {
        const Vec2 v = field({u[0], u[1]});
        du[0] = ds * v.x;
        du[1] = ds * v.y;
    };

    rk::Stepper<2> st(rhs, 0.0, {start.x, 0.0}, tol, limits.t_max);
    bool armed = false;
    double y_peak = 0.0;
    constexpr int kSamples = 4;

    while (true) {
        if (st.accepted() >= limits.max_steps)
            throw StepCapExceeded("step cap reached before returning to y = 0" + where(start));
        const double t_prev = st.t();
        const State u_prev = st.u();
        const State k_prev = st.slope();
        if (!st.advance(limits.t_max))
            throw NumericalError("step size underflow" + where(start));
        const auto& dense = st.dense();

        double ta = t_prev, ga = hs * u_prev[1];
        bool found = false;
        double tb = 0.0;
        for (int k = 1; k <= kSamples; ++k) {
            const double tk = k == kSamples ? st.t() : t_prev + (st.t() - t_prev) * k / kSamples;
            const double yk = k == kSamples ? st.u()[1] : dense.at(tk)[1];
            const double g = hs * yk;
            y_peak = std::max(y_peak, std::abs(yk));
            if (!armed) {
                if (g < -ev_arm)
                    throw HalfPlaneViolation("orbit crossed y = 0 inside the launch collar" + where(start));
                if (g > 2.0 * ev_arm) armed = true;
            } else if (g <= 0.0) {
                found = true;
                tb = tk;
                break;
            }
            ta = tk;
            ga = g;
        }
        // A shallow dip below y = 0 can fall between samples; look for an interior minimum.
        if (!found && armed && hs * k_prev[1] < 0.0 && hs * st.slope()[1] > 0.0) {
            const auto g_dense = [&dense, hs](double t) { return hs * dense.at(t)[1]; };
            const double tm = golden_minimize(g_dense, t_prev, st.t(), 1e-12 * (st.t() - t_prev));
            if (g_dense(tm) <= 0.0) {
                found = true;
                tb = tm;
                ta = t_prev;
                ga = hs * u_prev[1];
            }
        }

        if (found) {
            const double ev_loc = limits.event_tol * std::min(1.0, std::max(s2, y_peak));
            const auto g_dense = [&dense, hs](double t) { return hs * dense.at(t)[1]; };
            const double gb = g_dense(tb);
            double te = tb;
            if (gb != 0.0) te = brent_root(g_dense, ta, tb, ga, gb).x;

            // Polish with exact Runge-Kutta steps from the step start plus a Newton correction.
            State ue = dense.at(te), k7{};
            for (int it = 0; it < 4; ++it) {
                const double h = te - t_prev;
                if (h > 0.0) rk::dp5_step<2>(rhs, tol, t_prev, u_prev, k_prev, h, ue, k7, nullptr);
                else {
                    ue = u_prev;
                    rhs(t_prev, ue, k7);
                }
                if (std::abs(ue[1]) <= 1e-3 * ev_loc || k7[1] == 0.0) break;
                te -= ue[1] / k7[1];
            }
            if (!(std::abs(ue[1]) <= ev_loc))
                throw NumericalError("event localization missed the tolerance" + where(start));
            if (!(te > 0.0)) throw NumericalError("event located at the start point" + where(start));
            SectionHit hit;
            hit.point = {ue[0], 0.0};
            hit.time = ds * te;
            hit.steps = st.accepted();
            hit.y_residual = ue[1];
            hit.y_extreme = y_peak;
            return hit;
        }
        if (st.t() >= limits.t_max)
            throw TimeCapExceeded("flight time exceeded t_max" + where(start));
    }
}

double invariant_drift(const Poly2& first_integral, const SectionHit& hit, Point start) {
    return std::abs(first_integral(hit.point) - first_integral(start));
}

}  // namespace pseudohopf
