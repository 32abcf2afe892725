#include "pseudohopf/returns.hpp"

#include <algorithm>
#include <cmath>

#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"

namespace pseudohopf {

ModelMap::ModelMap(SmoothSeries s) : form_(std::move(s)) {
    const auto& c = std::get<SmoothSeries>(form_).coeffs;
    if (c.empty()) throw InvalidArgument("SmoothSeries needs at least one coefficient");
    if (!(c.front() <= 0.0)) throw InvalidArgument("SmoothSeries requires alpha_1 <= 0");
}

ModelMap::ModelMap(DulacLeading d) : form_(d) {
    if (!(d.alpha < 0.0 && d.r > 0.0 && d.ell > 0.0))
        throw InvalidArgument("DulacLeading requires alpha < 0, r > 0, ell > 0");
}

double ModelMap::operator()(double x) const {
    if (!(x > 0.0)) throw InvalidArgument("model map evaluated at x <= 0");
    if (const auto* d = std::get_if<DulacLeading>(&form_))
        return d->alpha * std::pow(x, d->r) + d->c2 * std::pow(x, d->r + d->ell);
    const auto& c = std::get<SmoothSeries>(form_).coeffs;
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc + *it) * x;
    return acc;
}

double ModelMap::leading_coeff() const {
    if (const auto* d = std::get_if<DulacLeading>(&form_)) return d->alpha;
    return std::get<SmoothSeries>(form_).coeffs.front();
}

double ModelMap::leading_exponent() const {
    if (const auto* d = std::get_if<DulacLeading>(&form_)) return d->r;
    return 1.0;
}

ModelFlight ModelFlight::constant(double T0, double correction, double exponent, int sign) {
    ModelFlight f{Form::Constant, T0, correction, exponent, sign};
    f.validate();
    return f;
}

ModelFlight ModelFlight::power(double T0, double exponent, int sign) {
    ModelFlight f{Form::Power, T0, 0.0, exponent, sign};
    f.validate();
    return f;
}

ModelFlight ModelFlight::log(double T0, int sign) {
    ModelFlight f{Form::Log, T0, 0.0, 0.0, sign};
    f.validate();
    return f;
}

void ModelFlight::validate() const {
    if (sign != 1 && sign != -1) throw InvalidArgument("flight sign must be +1 or -1");
    switch (form) {
        case Form::Log:
            if (!(T0 > 0.0)) throw InvalidArgument("Log flight requires T0 > 0");
            break;
        case Form::Power:
            if (!(exponent < 0.0)) throw InvalidArgument("Power flight requires a negative exponent");
            if (!(T0 > 0.0)) throw InvalidArgument("Power flight requires T0 > 0");
            break;
        case Form::Constant:
            if (T0 < 0.0) throw InvalidArgument("Constant flight requires T0 >= 0");
            if (!(exponent > 0.0)) throw InvalidArgument("Constant flight correction exponent must be positive");
            break;
    }
}

double ModelFlight::operator()(double x) const {
    if (!(x > 0.0)) throw InvalidArgument("model flight evaluated at x <= 0");
    double mag = 0.0;
    switch (form) {
        case Form::Constant: mag = T0 + correction * std::pow(x, exponent); break;
        case Form::Power: mag = T0 * std::pow(x, exponent); break;
        case Form::Log: mag = -T0 * std::log(x); break;
    }
    return sign * mag;
}

ReturnData half_return(const ReturnProvider& provider, Half side, double x) {
    ReturnData out;
    out.x = x;
    out.side = side;
    if (const auto* m = std::get_if<ModelProvider>(&provider)) {
        out.backend = Backend::Model;
        out.phi = m->map(x);
        out.tau = m->flight(x);
    } else {
        const auto& f = std::get<FlowProvider>(provider);
        out.backend = Backend::Flow;
        SectionHit hit;
        try {
            hit = flow_to_section(f.field, {x, 0.0}, side, Direction::Forward, f.limits);
        } catch (const WrongLaunchDirection&) {
            hit = flow_to_section(f.field, {x, 0.0}, side, Direction::Backward, f.limits);
        }
        out.phi = hit.point.x;
        out.tau = hit.time;
    }
    if (!(out.phi < 0.0)) throw NumericalError("half-return lands at a non-negative abscissa");
    if (out.tau == 0.0) throw NumericalError("half-return with zero flight time");
    return out;
}

double inverse_half_return(const ReturnProvider& provider, Half side, double y, Window window) {
    if (!(y < 0.0)) throw InvalidArgument("inverse_half_return: y must be negative");
    const auto grid = geomspace(window.x_floor, window.x0, 33);
    std::vector<double> phis;
    phis.reserve(grid.size());
    for (double x : grid) phis.push_back(half_return(provider, side, x).phi);
    for (size_t i = 1; i < phis.size(); ++i)
        if (!(phis[i] < phis[i - 1])) throw NumericalError("inverse_half_return: sampled map is not monotone");
    if (y > phis.front() || y < phis.back())
        throw InvalidArgument("inverse_half_return: y outside the sampled range of the map");
    const auto it = std::find_if(phis.begin(), phis.end(), [y](double p) { return p <= y; });
    const auto k = static_cast<size_t>(it - phis.begin());
    if (*it == y) return grid[k];
    const auto g = [&](double x) { return half_return(provider, side, x).phi - y; };
    return brent_root(g, grid[k - 1], grid[k], phis[k - 1] - y, phis[k] - y).x;
}

std::vector<double> fit_series(std::span<const double> x, std::span<const double> values, int first_power,
                               int terms, double* max_rel_residual) {
    if (x.size() != values.size() || static_cast<int>(x.size()) < terms)
        throw InvalidArgument("fit_series: not enough samples");
    // Scale each row by x^-first_power so the fit works on relative magnitudes.
    std::vector<double> design, rhs;
    for (size_t i = 0; i < x.size(); ++i) {
        const double w = std::pow(x[i], -first_power);
        for (int k = 0; k < terms; ++k) design.push_back(std::pow(x[i], k));
        rhs.push_back(values[i] * w);
    }
    const LinearFit lf = least_squares(design, terms, rhs);
    if (max_rel_residual) {
        double worst = 0.0;
        for (size_t i = 0; i < rhs.size(); ++i)
            worst = std::max(worst, std::abs(lf.residuals[i]) / std::max(std::abs(rhs[i]), 1e-300));
        *max_rel_residual = worst;
    }
    return lf.coeffs;
}

std::pair<double, double> fit_dulac(std::span<const double> x, std::span<const double> values,
                                    double* max_rel_residual) {
    if (x.size() != values.size() || x.size() < 2) throw InvalidArgument("fit_dulac: not enough samples");
    const int s = sign_of(values.front());
    std::vector<double> lx, ly;
    for (size_t i = 0; i < x.size(); ++i) {
        if (sign_of(values[i]) != s || s == 0) throw InvalidArgument("fit_dulac: values change sign");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(values[i])));
    }
    const Line line = fit_line(lx, ly);
    if (max_rel_residual) {
        double worst = 0.0;
        for (double r : line.residuals) worst = std::max(worst, std::abs(std::expm1(r)));
        *max_rel_residual = worst;
    }
    return {line.slope, s * std::exp(line.intercept)};
}

LocalCoeffs estimate_local_coeffs(const ReturnProvider& provider, Half side, std::span<const double> grid,
                                  CoeffFamily family, double residual_threshold) {
    if (grid.size() < 6) throw InvalidArgument("estimate_local_coeffs: need at least 6 samples");
    const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
    if (!(*lo > 0.0) || *hi < 10.0 * *lo)
        throw InvalidArgument("estimate_local_coeffs: samples must span at least one decade");
    std::vector<double> phis;
    phis.reserve(grid.size());
    for (double x : grid) phis.push_back(half_return(provider, side, x).phi);
    LocalCoeffs out;
    out.family = family;
    if (family == CoeffFamily::Smooth) {
        out.alpha = fit_series(grid, phis, 1, 3, &out.max_rel_residual);
    } else {
        const auto [r, a] = fit_dulac(grid, phis, &out.max_rel_residual);
        out.r = r;
        out.alpha_dulac = a;
    }
    out.residual_flag = out.max_rel_residual > residual_threshold;
    return out;
}

}  // namespace pseudohopf
