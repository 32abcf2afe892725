#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pseudohopf/system.hpp"

namespace pseudohopf {

struct SignTriple {
    int delta = 1;
    int sigma = 1;
    int mu = -1;
};

// delta = +1 when tau+ < 0 < tau-, else -1.
int orientation_sign(double tau_plus, double tau_minus);

// Signs of the unperturbed system from three probes of the window.
// Throws DegenerateSigns when Delta_0 vanishes or changes sign across probes.
SignTriple sign_data(const PiecewiseSystem& system);

// delta * (phi+(x - b) + b - phi-(x)).
double displacement(const PiecewiseSystem& system, double x, double b);

enum class Stability { Stable, Unstable };
std::string to_string(Stability s);

struct CycleRecord {
    double b = 0.0;
    double x_star = 0.0;
    double upper_entry = 0.0;  // x_star - b, carried exactly
    double period = 0.0;
    Stability stability = Stability::Stable;
    double delta_residual = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::vector<double> other_roots;  // further sign changes seen by the scan
};

enum class CycleOutcome { Found, NoSignChange };

struct CycleSearch {
    CycleOutcome outcome = CycleOutcome::NoSignChange;
    std::optional<CycleRecord> record;
    int samples = 0;  // grid points scanned
};

struct ScanOptions {
    double ratio = 1.05;   // geometric grid ratio upper bound
    int min_points = 200;  // the ratio is reduced until the grid has this many points
    double residual_scale = 1e-10;
};

// Scans Delta(., b) upward from max(0, b) + x_floor and refines the first sign change.
CycleSearch find_crossing_cycle(const PiecewiseSystem& system, double b, const ScanOptions& options = {});

// |tau+(x_star - b)| + |tau-(x_star)|.
double cycle_period(const PiecewiseSystem& system, double b, double x_star);

enum class Attractivity { Attracting, Repelling, NotSliding };
std::string to_string(Attractivity a);

struct SlidingSegment {
    double lo = 0.0;
    double hi = 0.0;
    Attractivity attractivity = Attractivity::NotSliding;
};

SlidingSegment sliding_segment(const PiecewiseSystem& system, double b);

// Least-squares coefficients of Delta_0(x) = sum_k V_{first+k} x^{first+k} on the grid.
std::vector<double> displacement_series(const PiecewiseSystem& system, std::span<const double> grid,
                                        int first_power, int terms, double* max_rel_residual = nullptr);

}  // namespace pseudohopf
