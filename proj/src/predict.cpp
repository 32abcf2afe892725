#include <algorithm>
#include <cmath>

#include "pseudohopf/asymptotics.hpp"
#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"

namespace pseudohopf {

namespace {

// Leading V_N of Delta_0 for analytic half-returns: analytic at N = 1, fitted above.
DisplacementLeading smooth_leading(const PiecewiseSystem& system, const SystemPrediction& p) {
    const double V1 = p.signs.delta * (p.upper.alpha - p.lower.alpha);
    if (std::abs(V1) > 1e-6) return {V1, 1.0, "smooth_N1"};
    const double lo = std::max(10.0 * system.window.x_floor, 1e-4);
    const double hi = std::min(system.window.x0 / 5.0, 0.02);
    const std::vector<double> grid = geomspace(lo, hi, 12);
    for (int N = 2; N <= 4; ++N) {
        double maxrel = 0.0;
        const std::vector<double> v = displacement_series(system, grid, N, 3, &maxrel);
        if (std::abs(v[0]) > 1e-6) return {v[0], static_cast<double>(N), "smooth_N" + std::to_string(N)};
    }
    throw PredictorRefused("Delta_0 has no resolvable leading term up to order 4");
}

}  // namespace

SystemPrediction predict_system(const PiecewiseSystem& system) {
    SystemPrediction out;
    out.signs = sign_data(system);
    out.upper = side_asymptotics(system.upper, Half::Upper);
    out.lower = side_asymptotics(system.lower, Half::Lower);

    try {
        if (out.upper.dulac || out.lower.dulac) {
            out.dulac = predict_position_dulac({out.upper.alpha, out.lower.alpha}, {out.upper.r, out.lower.r},
                                               out.signs.delta);
            out.leading = DisplacementLeading{out.dulac->V1, std::min(out.upper.r, out.lower.r), "dulac"};
            if (out.dulac->mu != out.signs.mu) out.notes.push_back("Dulac mu disagrees with the measured sign data");
            if (out.dulac->law) out.position = out.dulac->law;
            else out.notes.push_back("mixed exponents with mu = -1: position is o(b), no coefficient");
        } else {
            out.leading = smooth_leading(system, out);
            const int N = static_cast<int>(out.leading->exponent);
            out.position = predict_position_smooth(out.upper.alpha, out.leading->V, N);
        }
    } catch (const PredictorRefused& e) {
        out.notes.push_back(std::string("position predictor refused: ") + e.what());
    }

    if (!out.position) {
        out.notes.push_back("period law needs a position law");
    } else if (!out.upper.flight || !out.lower.flight) {
        out.notes.push_back("flight-time constants unavailable for a side");
    } else {
        const ComponentClass up = system.upper.declared.value_or(ComponentClass{});
        const ComponentClass down = system.lower.declared.value_or(ComponentClass{});
        try {
            out.period = predict_period_law(up, down, *out.position, *out.upper.flight, *out.lower.flight,
                                            PeriodContext{out.signs.mu, out.upper, out.lower});
        } catch (const Error& e) {
            out.notes.push_back(std::string("period composition failed: ") + e.what());
        }
    }
    return out;
}

}  // namespace pseudohopf
