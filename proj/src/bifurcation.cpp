#include "pseudohopf/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"

namespace pseudohopf {

int orientation_sign(double tau_plus, double tau_minus) { return (tau_plus < 0.0 && 0.0 < tau_minus) ? 1 : -1; }

namespace {

// Delta with the upper-frame abscissa u = x - b supplied exactly.
double displacement_split(const PiecewiseSystem& s, double x, double u, double b) {
    const ReturnData up = half_return(s, Half::Upper, u);
    const ReturnData lo = half_return(s, Half::Lower, x);
    return orientation_sign(up.tau, lo.tau) * (up.phi + b - lo.phi);
}

}  // namespace

SignTriple sign_data(const PiecewiseSystem& system) {
    const double lf = std::log(system.window.x_floor), l0 = std::log(system.window.x0);
    int delta = 0, sigma = 0;
    for (double frac : {0.5, 0.25, 0.75}) {
        const double x = std::exp(lf + frac * (l0 - lf));
        const ReturnData up = half_return(system, Half::Upper, x);
        const ReturnData lo = half_return(system, Half::Lower, x);
        const int d = orientation_sign(up.tau, lo.tau);
        const double d0 = d * (up.phi - lo.phi);
        if (!(std::abs(d0) > 1e-8 * x))
            throw DegenerateSigns("Delta_0 vanishes at the probe x = " + std::to_string(x) + " (center)");
        if (delta == 0) {
            delta = d;
            sigma = sign_of(d0);
        } else if (d != delta || sign_of(d0) != sigma) {
            throw DegenerateSigns("sign of Delta_0 or orientation differs across probes");
        }
    }
    return {delta, sigma, -sigma * delta};
}

double displacement(const PiecewiseSystem& system, double x, double b) {
    const double lo = std::max(0.0, b) + system.window.x_floor;
    const double hi = std::min(system.window.x0, system.window.x0 + b);
    if (!(x > lo && x < hi)) throw InvalidArgument("displacement: x outside the admissible window");
    return displacement_split(system, x, x - b, b);
}

std::string to_string(Stability s) { return s == Stability::Stable ? "stable" : "unstable"; }

std::string to_string(Attractivity a) {
    switch (a) {
        case Attractivity::Attracting: return "attracting";
        case Attractivity::Repelling: return "repelling";
        case Attractivity::NotSliding: break;
    }
    return "not_sliding";
}

CycleSearch find_crossing_cycle(const PiecewiseSystem& system, double b, const ScanOptions& options) {
    const double base = std::max(0.0, b);
    const double shift = std::max(0.0, -b);  // u = v + shift
    const double v_lo = system.window.x_floor;
    const double v_hi = std::min(system.window.x0, system.window.x0 + b) - base;
    if (!(v_hi > v_lo)) throw InvalidArgument("find_crossing_cycle: |b| leaves no admissible window");

    const double span = std::log(v_hi / v_lo);
    const double q = std::min(options.ratio, std::exp(span / (options.min_points - 1)));
    const int n = static_cast<int>(std::floor(span / std::log(q))) + 1;
    const auto delta_at = [&](double v) { return displacement_split(system, base + v, v + shift, b); };

    CycleSearch out;
    double v_prev = v_lo, d_prev = delta_at(v_lo);
    std::vector<std::pair<double, double>> brackets;
    std::vector<std::pair<double, double>> values;
    for (int k = 1; k < n; ++k) {
        const double v = k == n - 1 ? v_hi * (1.0 - 1e-12) : v_lo * std::pow(q, k);
        const double d = delta_at(v);
        if (sign_of(d) != sign_of(d_prev) || d == 0.0) {
            brackets.emplace_back(v_prev, v);
            values.emplace_back(d_prev, d);
        }
        v_prev = v;
        d_prev = d;
    }
    out.samples = n;
    if (brackets.empty()) return out;

    const auto [va, vb] = brackets.front();
    const auto [da, db] = values.front();
    const Root root = brent_root(delta_at, va, vb, da, db);
    // Report the bracket end with the smaller residual.
    double v_star = root.x, res = std::abs(root.fx);
    const double d_other = root.lo == root.x ? delta_at(root.hi) : delta_at(root.lo);
    if (std::abs(d_other) < res) {
        v_star = root.lo == root.x ? root.hi : root.lo;
        res = std::abs(d_other);
    }
    CycleRecord rec;
    rec.b = b;
    rec.upper_entry = v_star + shift;
    rec.x_star = base + v_star;
    rec.delta_residual = res;
    rec.bracket_lo = base + va;
    rec.bracket_hi = base + vb;
    rec.stability = (da > 0.0 || db < 0.0) ? Stability::Stable : Stability::Unstable;
    const double scale = std::max(rec.x_star, std::abs(b));
    if (!(res <= options.residual_scale * scale))
        throw NumericalError("cycle refinement stalled above the residual tolerance");
    for (size_t i = 1; i < brackets.size(); ++i) {
        const auto [a2, b2] = brackets[i];
        rec.other_roots.push_back(base + brent_root(delta_at, a2, b2, values[i].first, values[i].second).x);
    }
    const ReturnData up = half_return(system, Half::Upper, rec.upper_entry);
    const ReturnData lo = half_return(system, Half::Lower, rec.x_star);
    rec.period = std::abs(up.tau) + std::abs(lo.tau);
    out.outcome = CycleOutcome::Found;
    out.record = rec;
    return out;
}

double cycle_period(const PiecewiseSystem& system, double b, double x_star) {
    const ReturnData up = half_return(system, Half::Upper, x_star - b);
    const ReturnData lo = half_return(system, Half::Lower, x_star);
    return std::abs(up.tau) + std::abs(lo.tau);
}

namespace {

// Sign of Q on y = 0 at abscissa x (side's own frame).
int q_sign(const Component& c, Half side, double x) {
    if (const auto* f = std::get_if<FlowProvider>(&c.provider)) return sign_of(f->field.Q()(x, 0.0));
    // Model sides: the launch direction implied by the flight orientation,
    // reversed on the landing (negative) half of the section.
    const int tau_sign = std::get<ModelProvider>(c.provider).flight.sign;
    const int at_positive = side == Half::Upper ? tau_sign : -tau_sign;
    return x > 0.0 ? at_positive : -at_positive;
}

}  // namespace

SlidingSegment sliding_segment(const PiecewiseSystem& system, double b) {
    if (b == 0.0) throw InvalidArgument("sliding_segment: b must be nonzero");
    SlidingSegment seg{std::min(0.0, b), std::max(0.0, b), Attractivity::NotSliding};
    const double mid = 0.5 * b;
    const int qp = q_sign(system.upper, Half::Upper, mid - b);
    const int qm = q_sign(system.lower, Half::Lower, mid);
    if (qp < 0 && qm > 0) seg.attractivity = Attractivity::Attracting;
    else if (qp > 0 && qm < 0) seg.attractivity = Attractivity::Repelling;
    return seg;
}

std::vector<double> displacement_series(const PiecewiseSystem& system, std::span<const double> grid,
                                        int first_power, int terms, double* max_rel_residual) {
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (double x : grid) vals.push_back(displacement(system, x, 0.0));
    return fit_series(grid, vals, first_power, terms, max_rel_residual);
}

}  // namespace pseudohopf
