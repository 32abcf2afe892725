#include "pseudohopf/sweepfit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"

namespace pseudohopf {

void Grid::validate() const {
    if (!(b_max > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1)
        throw InvalidArgument("grid needs b_max > 0, 0 < ratio < 1 and count >= 1");
}

std::vector<double> Grid::magnitudes() const {
    validate();
    std::vector<double> out(count);
    for (int k = 0; k < count; ++k) out[k] = b_max * std::pow(ratio, k);
    return out;
}

void SweepResult::require_successes(int minimum) const {
    if (static_cast<int>(samples.size()) < minimum)
        throw NumericalError("sweep produced " + std::to_string(samples.size()) + " cycles, need " +
                             std::to_string(minimum));
}

int worker_count() {
    if (const char* env = std::getenv("PSEUDOHOPF_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
        throw ConfigError("PSEUDOHOPF_THREADS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult sweep(const PiecewiseSystem& system, const Grid& grid, std::optional<int> sign, int threads) {
    const std::vector<double> mags = grid.magnitudes();
    SweepResult out;
    out.grid = grid;
    out.sign = sign ? *sign : sign_data(system).mu;
    if (out.sign != 1 && out.sign != -1) throw InvalidArgument("sweep sign must be +1 or -1");

    struct Slot {
        std::optional<CycleRecord> record;
        std::optional<SweepFailure> failure;
    };
    std::vector<Slot> slots(mags.size());
    std::atomic<size_t> next{0};
    const auto work = [&] {
        for (size_t i = next++; i < mags.size(); i = next++) {
            const double b = out.sign * mags[i];
            try {
                CycleSearch cs = find_crossing_cycle(system, b);
                if (cs.record) slots[i].record = std::move(cs.record);
                else slots[i].failure = SweepFailure{b, "no_sign_change", "Delta(., b) keeps its sign"};
            } catch (const Error& e) {
                slots[i].failure = SweepFailure{b, error_kind(e), e.what()};
            }
        }
    };
    const int n = std::clamp(threads > 0 ? threads : worker_count(), 1, static_cast<int>(mags.size()));
    {
        std::vector<std::jthread> pool;
        for (int k = 1; k < n; ++k) pool.emplace_back(work);
        work();
    }
    for (Slot& s : slots) {
        if (s.record) out.samples.push_back(std::move(*s.record));
        if (s.failure) out.failures.push_back(std::move(*s.failure));
    }
    return out;
}

std::vector<Sample> position_samples(const SweepResult& result) {
    std::vector<Sample> out;
    for (const auto& r : result.samples) out.push_back({r.b, r.x_star});
    return out;
}

std::vector<Sample> period_samples(const SweepResult& result) {
    std::vector<Sample> out;
    for (const auto& r : result.samples) out.push_back({r.b, r.period});
    return out;
}

std::vector<Sample> asymptotic_window(std::span<const Sample> samples, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("window fraction must lie in (0, 1]");
    std::vector<Sample> sorted(samples.begin(), samples.end());
    std::ranges::sort(sorted, [](const Sample& a, const Sample& b) { return std::abs(a.b) > std::abs(b.b); });
    const size_t keep = std::max<size_t>(1, static_cast<size_t>(std::ceil(fraction * sorted.size() - 1e-9)));
    return {sorted.end() - static_cast<std::ptrdiff_t>(keep), sorted.end()};
}

namespace {

void require_count(std::span<const Sample> s, size_t n, const char* what) {
    if (s.size() < n) throw InvalidArgument(std::string(what) + ": needs at least " + std::to_string(n) + " samples");
    for (const Sample& p : s)
        if (p.b == 0.0 || !std::isfinite(p.b) || !std::isfinite(p.value))
            throw InvalidArgument(std::string(what) + ": samples need finite values and b != 0");
}

std::pair<double, double> window_of(std::span<const Sample> s) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Sample& p : s) {
        lo = std::min(lo, std::abs(p.b));
        hi = std::max(hi, std::abs(p.b));
    }
    return {lo, hi};
}

double max_rel(std::span<const Sample> s, const AsymptoticLaw& law) {
    double m = 0.0;
    for (const Sample& p : s) m = std::max(m, std::abs(law(p.b) / p.value - 1.0));
    return m;
}

struct ConstantFit {
    double T0, c, lambda, sse, r_squared;
};

ConstantFit constant_at(std::span<const Sample> s, double lambda) {
    std::vector<double> design, rhs;
    for (const Sample& p : s) {
        design.push_back(1.0);
        design.push_back(std::pow(std::abs(p.b), lambda));
        rhs.push_back(p.value);
    }
    const LinearFit f = least_squares(design, 2, rhs);
    double sse = 0.0;
    for (double r : f.residuals) sse += r * r;
    return {f.coeffs[0], f.coeffs[1], lambda, sse, f.r_squared};
}

}  // namespace

FitResult fit_power(std::span<const Sample> samples) {
    require_count(samples, 8, "fit_power");
    std::vector<double> lx, ly;
    for (const Sample& p : samples) {
        if (!(p.value > 0.0)) throw InvalidArgument("fit_power: values must be positive");
        lx.push_back(std::log(std::abs(p.b)));
        ly.push_back(std::log(p.value));
    }
    const Line line = fit_line(lx, ly);
    FitResult out;
    out.law.family = line.slope < 0.0 ? LawFamily::NegPower : LawFamily::Power;
    out.law.provenance = Provenance::Fitted;
    out.law.exponent = line.slope;
    out.law.coefficient = std::exp(line.intercept);
    out.law.case_tag = "log_log_regression";
    out.r_squared = line.r_squared;
    out.max_rel_residual = max_rel(samples, out.law);
    out.window = window_of(samples);
    return out;
}

FitResult fit_log(std::span<const Sample> samples) {
    require_count(samples, 8, "fit_log");
    std::vector<double> lx, y;
    for (const Sample& p : samples) {
        lx.push_back(-std::log(std::abs(p.b)));
        y.push_back(p.value);
    }
    const Line line = fit_line(lx, y);
    FitResult out;
    out.law.family = LawFamily::Log;
    out.law.provenance = Provenance::Fitted;
    out.law.coefficient = line.slope;
    out.law.offset = line.intercept;
    out.law.exponent = 0.0;
    out.law.case_tag = "semilog_regression";
    out.r_squared = line.r_squared;
    out.max_rel_residual = max_rel(samples, out.law);
    out.window = window_of(samples);
    return out;
}

FitResult fit_constant(std::span<const Sample> samples) {
    require_count(samples, 8, "fit_constant");
    std::vector<Sample> sorted(samples.begin(), samples.end());
    std::ranges::sort(sorted, [](const Sample& a, const Sample& b) { return std::abs(a.b) > std::abs(b.b); });
    const auto spread = [](std::span<const Sample> s) {
        const auto [lo, hi] = std::ranges::minmax(s, {}, &Sample::value);
        return hi.value - lo.value;
    };
    const size_t half = sorted.size() / 2;
    const double big = spread(std::span(sorted).first(half));
    const double small = spread(std::span(sorted).subspan(half));
    double scale = 0.0;
    for (const Sample& p : sorted) scale = std::max(scale, std::abs(p.value));
    const bool flat = spread(sorted) <= 1e-13 * scale;
    if (!flat && small >= 0.9 * big)
        throw NumericalError("fit_constant: samples do not settle toward small |b|");

    ConstantFit best{};
    if (flat) {
        best = constant_at(sorted, 1.0);
    } else {
        // Variable projection: T0 and c are linear once lambda is fixed.
        constexpr double lo = 0.02, hi = 3.0;
        constexpr int n = 150;
        double lam_best = lo, sse_best = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= n; ++k) {
            const double lam = lo * std::pow(hi / lo, static_cast<double>(k) / n);
            const double sse = constant_at(sorted, lam).sse;
            if (sse < sse_best) {
                sse_best = sse;
                lam_best = lam;
            }
        }
        const double step = std::pow(hi / lo, 1.0 / n);
        const double a = std::max(lo, lam_best / step), b = std::min(hi, lam_best * step);
        const double lam = golden_minimize([&](double l) { return constant_at(sorted, l).sse; }, a, b, 1e-10);
        best = constant_at(sorted, lam);
    }
    FitResult out;
    out.law.family = LawFamily::Constant;
    out.law.provenance = Provenance::Fitted;
    out.law.coefficient = best.T0;
    out.law.offset = best.c;
    out.law.exponent = best.lambda;
    out.law.case_tag = "variable_projection";
    out.r_squared = flat ? 1.0 : best.r_squared;
    out.max_rel_residual = max_rel(samples, out.law);
    out.window = window_of(samples);
    return out;
}

FitResult classify_law(std::span<const Sample> samples) {
    require_count(samples, 10, "classify_law");
    const auto [lo, hi] = window_of(samples);
    if (hi / lo < 100.0 * (1.0 - 1e-12)) throw InvalidArgument("classify_law: samples must span two decades of |b|");

    std::vector<FitResult> candidates;
    bool positive = std::ranges::all_of(samples, [](const Sample& p) { return p.value > 0.0; });
    if (positive) candidates.push_back(fit_power(samples));
    if (FitResult f = fit_log(samples); f.law.coefficient > 0.0) candidates.push_back(f);
    try {
        FitResult f = fit_constant(samples);
        const double corr = std::abs(f.law.offset) * std::pow(hi, f.law.exponent);
        if (f.law.coefficient > 0.0 && corr < f.law.coefficient) candidates.push_back(f);
    } catch (const NumericalError&) {
    }
    if (candidates.empty()) throw NumericalError("classify_law: no family fits the samples");
    std::ranges::stable_sort(candidates, {}, &FitResult::max_rel_residual);
    FitResult out = candidates.front();
    if (candidates.size() > 1) {
        const double second = candidates[1].max_rel_residual;
        out.margin = second > 0.0 ? 1.0 - out.max_rel_residual / second : 0.0;
        out.ambiguous = out.margin < 0.1;
    } else {
        out.margin = 1.0;
    }
    return out;
}

Verdict compare(const AsymptoticLaw& predicted, const FitResult& fitted, const CompareTolerances& tol) {
    std::ostringstream msg;
    msg.precision(6);
    const AsymptoticLaw& f = fitted.law;
    if (predicted.family != f.family) {
        msg << "family mismatch: predicted " << to_string(predicted.family) << ", fitted " << to_string(f.family);
        return {false, msg.str()};
    }
    const auto rel = [](double a, double b) { return std::abs(a / b - 1.0); };
    bool pass = true;
    switch (predicted.family) {
        case LawFamily::Power:
        case LawFamily::NegPower: {
            const double de = std::abs(f.exponent - predicted.exponent);
            const double dc = rel(f.coefficient, predicted.coefficient);
            pass = de <= tol.exponent && dc <= tol.coefficient;
            msg << "exponent " << f.exponent << " vs " << predicted.exponent << " (|d| " << de << ", tol "
                << tol.exponent << "); coefficient " << f.coefficient << " vs " << predicted.coefficient
                << " (rel " << dc << ", tol " << tol.coefficient << ")";
            break;
        }
        case LawFamily::Log: {
            const double dc = rel(f.coefficient, predicted.coefficient);
            pass = dc <= tol.coefficient;
            msg << "slope " << f.coefficient << " vs " << predicted.coefficient << " (rel " << dc << ", tol "
                << tol.coefficient << ")";
            break;
        }
        case LawFamily::Constant: {
            const double dc = rel(f.coefficient, predicted.coefficient);
            pass = dc <= tol.coefficient;
            msg << "limit " << f.coefficient << " vs " << predicted.coefficient << " (rel " << dc << ", tol "
                << tol.coefficient << ")";
            break;
        }
    }
    return {pass, msg.str()};
}

}  // namespace pseudohopf
