#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pseudohopf/asymptotics.hpp"
#include "pseudohopf/bifurcation.hpp"

namespace pseudohopf {

// Magnitudes b_max * ratio^k for k = 0..count-1.
struct Grid {
    double b_max = 1e-2;
    double ratio = 0.5;
    int count = 20;

    void validate() const;
    std::vector<double> magnitudes() const;
};

struct SweepFailure {
    double b = 0.0;
    std::string kind;  // "no_sign_change" or the error class
    std::string message;
};

struct SweepResult {
    std::vector<CycleRecord> samples;  // |b| descending
    Grid grid;
    int sign = 1;
    std::vector<SweepFailure> failures;

    // Throws NumericalError when fewer than `minimum` grid points produced a cycle.
    void require_successes(int minimum = 8) const;
};

// Worker count from PSEUDOHOPF_THREADS, else the hardware concurrency.
int worker_count();

// Runs find_crossing_cycle at sign * |b| for every grid magnitude. The sign
// defaults to mu from sign_data. Per-point failures are recorded, not thrown.
SweepResult sweep(const PiecewiseSystem& system, const Grid& grid = {}, std::optional<int> sign = {},
                  int threads = 0);

struct Sample {
    double b = 0.0;
    double value = 0.0;
};

std::vector<Sample> position_samples(const SweepResult& result);
std::vector<Sample> period_samples(const SweepResult& result);

// The `fraction` of samples with the smallest |b| (at least one sample).
std::vector<Sample> asymptotic_window(std::span<const Sample> samples, double fraction);

struct FitResult {
    AsymptoticLaw law;
    double r_squared = 0.0;  // in the linearized coordinates of the family
    double max_rel_residual = 0.0;
    std::pair<double, double> window{0.0, 0.0};  // (|b|_min, |b|_max)
    double margin = 0.0;     // classify_law only: 1 - best / runner-up residual
    bool ambiguous = false;  // classify_law only: margin below 10%
};

// Fits label their law LawOf::Position; callers fitting periods relabel it.

// Line in (ln|b|, ln value); a negative slope yields the NegPower family.
FitResult fit_power(std::span<const Sample> samples);
// Line in (-ln|b|, value).
FitResult fit_log(std::span<const Sample> samples);
// value = T0 + c |b|^lambda, lambda by variable projection on [0.02, 3].
// Throws NumericalError when the spread does not shrink toward small |b|.
FitResult fit_constant(std::span<const Sample> samples);
// Best of the power, log and constant fits by maximum relative residual.
FitResult classify_law(std::span<const Sample> samples);

struct CompareTolerances {
    double exponent = 0.02;
    double coefficient = 0.02;
};

struct Verdict {
    bool pass = false;
    std::string details;
};

Verdict compare(const AsymptoticLaw& predicted, const FitResult& fitted, const CompareTolerances& tol = {});

}  // namespace pseudohopf
