#pragma once

#include "pseudohopf/fields.hpp"

namespace pseudohopf {

enum class Half { Upper, Lower };
enum class Direction { Forward, Backward };

struct IntegrationLimits {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_max = 1e6;
    int max_steps = 200000;
    double event_tol = 1e-12;

    void validate() const;
};

struct SectionHit {
    Point point;
    double time = 0.0;        // signed: negative for backward integration
    int steps = 0;
    double y_residual = 0.0;  // y at the reported hit before projection onto y = 0
    double y_extreme = 0.0;   // largest |y| met along the arc
};

// Carries `start` (on y = 0) through one half-plane and back to y = 0.
//
// Tolerances are applied relative to the launch scale s = min(1, |start.x|):
// absolute and event tolerances shrink by s^2 so that orbits launched near the
// origin are resolved with the same relative accuracy as unit-size ones.
SectionHit flow_to_section(const PlanarField& field, Point start, Half half, Direction direction,
                           const IntegrationLimits& limits = {});

// |H(hit) - H(start)|.
double invariant_drift(const Poly2& first_integral, const SectionHit& hit, Point start);

}  // namespace pseudohopf
