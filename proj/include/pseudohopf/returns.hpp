#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "pseudohopf/fields.hpp"
#include "pseudohopf/flow.hpp"

namespace pseudohopf {

// phi(x) = sum_i coeffs[i-1] x^i
struct SmoothSeries {
    std::vector<double> coeffs;
};

// phi(x) = alpha x^r + c2 x^(r + ell)
struct DulacLeading {
    double alpha = -1.0;
    double r = 1.0;
    double c2 = 0.0;
    double ell = 1.0;
};

class ModelMap {
public:
    ModelMap() = default;
    ModelMap(SmoothSeries s);  // NOLINT(google-explicit-constructor)
    ModelMap(DulacLeading d);  // NOLINT(google-explicit-constructor)

    double operator()(double x) const;
    double leading_coeff() const;
    double leading_exponent() const;
    bool is_dulac() const { return std::holds_alternative<DulacLeading>(form_); }
    const std::variant<SmoothSeries, DulacLeading>& form() const { return form_; }

private:
    std::variant<SmoothSeries, DulacLeading> form_{SmoothSeries{{-1.0}}};
};

// Flight-time model; `sign` is the orientation of tau on this side.
struct ModelFlight {
    enum class Form { Constant, Power, Log };
    Form form = Form::Constant;
    double T0 = 0.0;          // Constant: limit value; Power: coefficient; Log: slope against -ln x
    double correction = 0.0;  // Constant only: coefficient of x^exponent
    double exponent = 1.0;    // Constant: correction exponent; Power: exponent (< 0)
    int sign = 1;

    static ModelFlight constant(double T0, double correction, double exponent, int sign);
    static ModelFlight power(double T0, double exponent, int sign);
    static ModelFlight log(double T0, int sign);

    double operator()(double x) const;
    void validate() const;
};

struct FlowProvider {
    PlanarField field;
    IntegrationLimits limits;
};

struct ModelProvider {
    ModelMap map;
    ModelFlight flight;
};

using ReturnProvider = std::variant<FlowProvider, ModelProvider>;

enum class Backend { Flow, Model };

struct ReturnData {
    double phi = 0.0;
    double tau = 0.0;
    double x = 0.0;
    Half side = Half::Upper;
    Backend backend = Backend::Flow;
};

ReturnData half_return(const ReturnProvider& provider, Half side, double x);

struct Window {
    double x_floor = 1e-6;
    double x0 = 0.5;
};

// x with phi(x) = y, bracketed on a sampled grid of the window.
double inverse_half_return(const ReturnProvider& provider, Half side, double y, Window window = {});

enum class CoeffFamily { Smooth, Dulac };

struct LocalCoeffs {
    CoeffFamily family = CoeffFamily::Smooth;
    std::vector<double> alpha;  // Smooth: alpha_1..alpha_3
    double r = 0.0;             // Dulac exponent
    double alpha_dulac = 0.0;   // Dulac coefficient
    double max_rel_residual = 0.0;
    bool residual_flag = false;  // residual above the reporting threshold
};

// Least-squares values(x) = sum_k c_k x^(first_power + k), k < terms.
std::vector<double> fit_series(std::span<const double> x, std::span<const double> values, int first_power,
                               int terms, double* max_rel_residual = nullptr);

// ln|v| = ln|c| + e ln x; returns (e, c) with c carrying the common sign of v.
std::pair<double, double> fit_dulac(std::span<const double> x, std::span<const double> values,
                                    double* max_rel_residual = nullptr);

LocalCoeffs estimate_local_coeffs(const ReturnProvider& provider, Half side, std::span<const double> grid,
                                  CoeffFamily family, double residual_threshold = 1e-6);

}  // namespace pseudohopf
