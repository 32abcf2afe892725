#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudohopf/bifurcation.hpp"
#include "pseudohopf/fields.hpp"
#include "pseudohopf/returns.hpp"
#include "pseudohopf/system.hpp"

namespace pseudohopf {

enum class LawFamily { Power, NegPower, Log, Constant };
enum class LawOf { Position, Period };
enum class Provenance { Predicted, Fitted };

std::string to_string(LawFamily f);
std::string to_string(LawOf o);
std::string to_string(Provenance p);

// Power/NegPower: coefficient * |b|^exponent.
// Log: coefficient * (-ln|b|) + offset.
// Constant: coefficient + offset * |b|^exponent.
struct AsymptoticLaw {
    LawFamily family = LawFamily::Power;
    LawOf of = LawOf::Position;
    Provenance provenance = Provenance::Predicted;
    double coefficient = 1.0;
    double exponent = 1.0;
    double offset = 0.0;
    std::optional<double> remainder_order;
    std::string case_tag;
    std::string anchor;

    double operator()(double b) const;
    void validate() const;
};

// Leading term of the unperturbed displacement.
struct DisplacementLeading {
    double V = 0.0;
    double exponent = 1.0;
    std::string case_tag;  // "smooth_N<k>" or "dulac"
};

// ---- Table of leading laws --------------------------------------------------

struct SymbolicLaw {
    LawFamily family = LawFamily::Power;
    std::optional<double> exponent;  // empty when only symbolic
    std::string symbol;              // e.g. "1/2n", "-1/n", "r", "-ln|b|"
};

struct TableLaw {
    std::string row;  // e.g. "N-focus/Fold"
    SymbolicLaw period;
    SymbolicLaw position;
};

// `N` (leading displacement order) fills exponents that the classes alone leave open.
TableLaw table_law(const ComponentClass& up, const ComponentClass& down, std::optional<int> N = {});

// ---- Position predictors ----------------------------------------------------

AsymptoticLaw predict_position_smooth(double alpha1_plus, double V_N, int N);

struct DulacPrediction {
    std::optional<AsymptoticLaw> law;  // empty only in the mixed mu = -1 branch (x = o(b))
    double V1 = 0.0;
    int mu = 0;
    bool mixed = false;
    bool coefficient_exact = true;
    std::string case_tag;
};

// Literal five-case ledger plus the mixed-exponent branch.
DulacPrediction predict_position_dulac(std::pair<double, double> alpha1, std::pair<double, double> r, int delta);

// Same quantity through the side-swapped (r_m >= 1, mu = -1) or x-reversed
// (r_m <= 1) constructions; used as an independent consistency check.
DulacPrediction predict_position_dulac_alternate(std::pair<double, double> alpha1, std::pair<double, double> r,
                                                 int delta);

struct DulacInverse {
    double kappa = 0.0;
    double rho = 0.0;
};

// Leading term of the inverse of D(x) = alpha x^r: x = kappa |y|^rho.
// `reflected` returns the sign-carrying variant kappa_1 = -|alpha|^(-rho).
DulacInverse dulac_invert_leading(double alpha, double r, bool reflected = false);

// ---- Component constants ----------------------------------------------------

double efocus_alpha1(double a10, double a01, double b10, double b01);
// Closed form keeping only the nu-term of the blown-up radial equation. For odd n
// with beta = n - 1 and b != 0 the dropped term does not cancel, and the return
// of the flow differs; side_asymptotics integrates the full blow-up instead.
double nfocus_alpha1(double a, double b, int n, int beta);

using PolarEval = std::function<double(double r, double theta)>;

struct GasullCoeffs {
    double r1_pi = 0.0;
    double r2_pi = 0.0;
    double T_hat_0 = 0.0;
    double T_hat_prime_0 = 0.0;
};

GasullCoeffs gasull_coeffs(const PolarEval& A, const PolarEval& B, int m);

// Quasi-homogeneous blow-up x = r^p cos(theta), y = r^q sin(theta) of a field,
// normalized by r^m. `reversed` is set when time had to be reversed to make B0 > 0.
struct Blowup {
    PolarEval A;
    PolarEval B;
    int p = 1;
    int q = 1;
    int m = 0;
    bool reversed = false;
};

Blowup polar_blowup(const PlanarField& field, int p, int q, int m);

// Map and flight leading data of one side, in the side's own frame.
struct SideAsymptotics {
    bool dulac = false;         // leading exponent may be non-integer
    double alpha = -1.0;        // leading coefficient of phi
    double r = 1.0;             // leading exponent of phi
    std::optional<ModelFlight> flight;
    std::optional<GasullCoeffs> gasull;
};

SideAsymptotics side_asymptotics(const Component& component, Half side);

// ---- Period composition -----------------------------------------------------

// Optional data to compose the upper flight at the translated abscissa x - b.
struct PeriodContext {
    int mu = 1;
    SideAsymptotics upper;
    SideAsymptotics lower;
};

AsymptoticLaw predict_period_law(const ComponentClass& up, const ComponentClass& down, const AsymptoticLaw& position,
                                 const ModelFlight& flight_up, const ModelFlight& flight_down,
                                 const std::optional<PeriodContext>& context = {});

// ---- System-level predictions ----------------------------------------------

struct SystemPrediction {
    SignTriple signs;
    SideAsymptotics upper;
    SideAsymptotics lower;
    std::optional<DisplacementLeading> leading;
    std::optional<DulacPrediction> dulac;
    std::optional<AsymptoticLaw> position;
    std::optional<AsymptoticLaw> period;
    std::vector<std::string> notes;  // why a law is missing
};

// Runs every predictor the component data supports. Refusals are recorded in
// `notes`; only sign_data failures propagate.
SystemPrediction predict_system(const PiecewiseSystem& system);

}  // namespace pseudohopf
