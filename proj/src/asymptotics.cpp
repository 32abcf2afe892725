#include "pseudohopf/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"
#include "pseudohopf/rk.hpp"

namespace pseudohopf {

std::string to_string(LawFamily f) {
    switch (f) {
        case LawFamily::Power: return "power";
        case LawFamily::NegPower: return "neg_power";
        case LawFamily::Log: return "log";
        case LawFamily::Constant: break;
    }
    return "constant";
}

std::string to_string(LawOf o) { return o == LawOf::Position ? "position" : "period"; }
std::string to_string(Provenance p) { return p == Provenance::Predicted ? "predicted" : "fitted"; }

double AsymptoticLaw::operator()(double b) const {
    const double ab = std::abs(b);
    switch (family) {
        case LawFamily::Power:
        case LawFamily::NegPower: return coefficient * std::pow(ab, exponent);
        case LawFamily::Log: return -coefficient * std::log(ab) + offset;
        case LawFamily::Constant: break;
    }
    return coefficient + offset * std::pow(ab, exponent);
}

void AsymptoticLaw::validate() const {
    switch (family) {
        case LawFamily::Power:
            if (!(coefficient > 0.0)) throw InvalidArgument("power law requires a positive coefficient");
            break;
        case LawFamily::NegPower:
            if (!(coefficient > 0.0) || !(exponent < 0.0))
                throw InvalidArgument("negative power law requires c > 0 and a negative exponent");
            break;
        case LawFamily::Log:
            if (!(coefficient > 0.0)) throw InvalidArgument("log law requires T0 > 0");
            break;
        case LawFamily::Constant: break;
    }
}

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

bool is_polycycle(ComponentKind k) {
    return k == ComponentKind::PolycycleTangential || k == ComponentKind::PolycycleSingular;
}

}  // namespace

TableLaw table_law(const ComponentClass& up, const ComponentClass& down, std::optional<int> N) {
    const auto has = [&](ComponentKind k) { return up.kind == k || down.kind == k; };
    const auto pick = [&](ComponentKind k) -> const ComponentClass& { return up.kind == k ? up : down; };
    TableLaw out;
    // Row label follows the table's ordering: the dominant class first.
    const ComponentClass* first = &up;
    const ComponentClass* second = &down;
    const auto rank = [](ComponentKind k) {
        switch (k) {
            case ComponentKind::Cusp: return 0;
            case ComponentKind::NFocus: return 1;
            case ComponentKind::PolycycleTangential:
            case ComponentKind::PolycycleSingular: return 2;
            case ComponentKind::PeriodicOrbit: return 3;
            case ComponentKind::EFocus: return 4;
            case ComponentKind::Fold: return 5;
        }
        return 6;
    };
    if (rank(second->kind) < rank(first->kind)) std::swap(first, second);
    const auto label = [](ComponentKind k) { return is_polycycle(k) ? std::string("Polycycle") : display_name(k); };
    out.row = label(first->kind) + "/" + label(second->kind);

    if (has(ComponentKind::Cusp)) {
        const int n = pick(ComponentKind::Cusp).n;
        const double pq = static_cast<double>(2 * n - 1) / (2 * n + 1);
        out.period = {LawFamily::NegPower, -pq, "-p/q"};
        out.position = {LawFamily::Power, 1.0, "1"};
    } else if (has(ComponentKind::NFocus)) {
        const int n = pick(ComponentKind::NFocus).n;
        out.period = {LawFamily::NegPower, -1.0 / n, "-1/n"};
        if (has(ComponentKind::PolycycleTangential) || has(ComponentKind::PolycycleSingular))
            out.position = {LawFamily::Power, std::nullopt, "r"};
        else
            out.position = {LawFamily::Power, 1.0 / n, "1/n"};
    } else if (has(ComponentKind::PolycycleTangential) || has(ComponentKind::PolycycleSingular)) {
        out.period = {LawFamily::Log, std::nullopt, "-ln|b|"};
        out.position = {LawFamily::Power, std::nullopt, "r"};
    } else if (has(ComponentKind::PeriodicOrbit) || has(ComponentKind::EFocus)) {
        out.period = {LawFamily::Constant, std::nullopt, "constant"};
        out.position = {LawFamily::Power, N ? std::optional<double>(1.0 / *N) : std::nullopt, "1/n"};
    } else {
        const int order = N.value_or(2);
        out.period = {LawFamily::Power, 1.0 / order, "1/2n"};
        out.position = {LawFamily::Power, 1.0 / order, "1/2n"};
    }
    return out;
}

AsymptoticLaw predict_position_smooth(double alpha1_plus, double V_N, int N) {
    if (N < 1) throw InvalidArgument("predict_position_smooth: N must be >= 1");
    if (V_N == 0.0) throw InvalidArgument("predict_position_smooth: V_N must be nonzero");
    if (alpha1_plus > 0.0) throw InvalidArgument("predict_position_smooth: alpha1+ must be <= 0");
    AsymptoticLaw law;
    law.family = LawFamily::Power;
    law.of = LawOf::Position;
    law.coefficient = std::pow((1.0 - alpha1_plus) / std::abs(V_N), 1.0 / N);
    law.exponent = 1.0 / N;
    law.remainder_order = 2.0 / N;
    law.case_tag = "smooth_N" + std::to_string(N);
    law.anchor = "position theorem, analytic half-return maps";
    return law;
}

namespace {

double dispatch_v1(double ap, double am, double rp, double rm, int delta) {
    if (close(rp, rm)) return delta * (ap - am);
    return rp < rm ? delta * ap : -delta * am;
}

AsymptoticLaw position_law(double c, double lambda, const std::string& tag) {
    AsymptoticLaw law;
    law.family = LawFamily::Power;
    law.of = LawOf::Position;
    law.coefficient = c;
    law.exponent = lambda;
    law.case_tag = tag;
    law.anchor = "position theorem, Dulac-type half-return maps";
    return law;
}

struct DulacSetup {
    double ap, am, rp, rm, r_min, V1;
    int delta, mu;
    bool mixed;
};

DulacSetup dulac_setup(std::pair<double, double> alpha1, std::pair<double, double> r, int delta) {
    const auto [ap, am] = alpha1;
    const auto [rp, rm] = r;
    if (!(ap < 0.0 && am < 0.0)) throw InvalidArgument("Dulac predictor: leading coefficients must be negative");
    if (!(rp > 0.0 && rm > 0.0)) throw InvalidArgument("Dulac predictor: exponents must be positive");
    if (delta != 1 && delta != -1) throw InvalidArgument("Dulac predictor: delta must be +1 or -1");
    const double V1 = dispatch_v1(ap, am, rp, rm, delta);
    // Gasull-derived alpha carry about 1e-12 error; treat smaller V1 as a cancellation.
    if (std::abs(V1) <= 1e-9 * std::max(std::abs(ap), std::abs(am)))
        throw PredictorRefused("leading displacement coefficient V1 vanishes; no Dulac prediction");
    const double fp = close(rp, 1.0) ? 0.0 : rp - 1.0;
    const double fm = close(rm, 1.0) ? 0.0 : rm - 1.0;
    return {ap, am, rp, rm, std::min(rp, rm), V1, delta, -sign_of(V1) * delta, fp * fm < 0.0};
}

DulacPrediction mixed_prediction(const DulacSetup& s) {
    DulacPrediction out;
    out.V1 = s.V1;
    out.mu = s.mu;
    out.mixed = true;
    if (s.mu == 1) {
        out.case_tag = "mixed_mu_plus";
        out.law = position_law(1.0, 1.0, out.case_tag);
    } else {
        out.case_tag = "mixed_mu_minus";
        out.coefficient_exact = false;
    }
    return out;
}

}  // namespace

DulacPrediction predict_position_dulac(std::pair<double, double> alpha1, std::pair<double, double> r, int delta) {
    const DulacSetup s = dulac_setup(alpha1, r, delta);
    if (s.mixed) return mixed_prediction(s);
    DulacPrediction out;
    out.V1 = s.V1;
    out.mu = s.mu;
    const double aV = std::abs(s.V1);
    double c = 0.0, lambda = 1.0;
    if (s.r_min >= 1.0 || close(s.r_min, 1.0)) {
        lambda = 1.0 / s.r_min;
        if (!close(s.rp, 1.0) && s.rp > 1.0) {
            c = 1.0 / std::pow(aV, 1.0 / s.r_min);
            out.case_tag = "rm_ge1_rplus_gt1";
        } else {
            c = (1.0 - s.ap) / aV;
            out.case_tag = "rm_ge1_rplus_eq1";
        }
    } else if (close(s.rp, 1.0)) {
        c = (1.0 - s.ap) / std::abs(s.ap);
        out.case_tag = "rm_le1_rminus_lt_rplus_eq1";
    } else if (!close(s.rp, s.rm)) {
        c = 1.0;
        out.case_tag = "rm_le1_rplus_lt1";
    } else {
        const double wp = std::pow(std::abs(s.ap), 1.0 / s.r_min), wm = std::pow(std::abs(s.am), 1.0 / s.r_min);
        c = wp / std::abs(wp - wm);
        out.case_tag = "rm_le1_equal_exponents";
    }
    out.law = position_law(c, lambda, out.case_tag);
    return out;
}

DulacPrediction predict_position_dulac_alternate(std::pair<double, double> alpha1, std::pair<double, double> r,
                                                 int delta) {
    const DulacSetup s = dulac_setup(alpha1, r, delta);
    if (s.mixed) return mixed_prediction(s);
    if (s.r_min >= 1.0 || close(s.r_min, 1.0)) {
        if (s.mu == 1) {
            DulacPrediction out = predict_position_dulac(alpha1, r, delta);
            out.case_tag += "_direct";
            out.law->case_tag = out.case_tag;
            return out;
        }
        // Swap the sides: the cycle of the swapped family at -b, shifted back by b.
        DulacPrediction out;
        out.V1 = s.V1;
        out.mu = s.mu;
        const double aV = std::abs(s.V1);
        double c = 0.0;
        if (close(s.rm, 1.0)) c = (1.0 - s.am) / aV - 1.0;
        else c = 1.0 / std::pow(aV, 1.0 / s.rm);
        out.case_tag = "swapped_sides";
        out.law = position_law(c, 1.0 / s.rm, out.case_tag);
        return out;
    }
    // x-reversed system: inverse maps kappa x^rho on both sides, then map back.
    const DulacInverse ip = dulac_invert_leading(s.ap, s.rp, true);
    const DulacInverse im = dulac_invert_leading(s.am, s.rm, true);
    double W1 = 0.0;
    if (close(ip.rho, im.rho)) W1 = s.delta * (ip.kappa - im.kappa);
    else W1 = ip.rho < im.rho ? s.delta * ip.kappa : -s.delta * im.kappa;
    const double rho_min = std::min(ip.rho, im.rho);
    const double chi0 = close(ip.rho, 1.0) ? (1.0 - ip.kappa) / std::pow(std::abs(W1), 1.0 / rho_min)
                                           : 1.0 / std::pow(std::abs(W1), 1.0 / rho_min);
    const bool upper_star = ip.rho < im.rho && !close(ip.rho, im.rho);
    const double kappa_star = upper_star ? ip.kappa : im.kappa;
    DulacPrediction out;
    out.V1 = s.V1;
    out.mu = s.mu;
    out.case_tag = "x_reversed";
    out.law = position_law(-kappa_star * std::pow(chi0, rho_min), 1.0, out.case_tag);
    return out;
}

DulacInverse dulac_invert_leading(double alpha, double r, bool reflected) {
    if (alpha == 0.0 || !(r > 0.0)) throw InvalidArgument("dulac_invert_leading: need alpha != 0 and r > 0");
    const double rho = 1.0 / r;
    const double kappa = std::pow(std::abs(alpha), -rho);
    return {reflected ? -kappa : kappa, rho};
}

double efocus_alpha1(double a10, double a01, double b10, double b01) {
    const double disc = (a10 - b01) * (a10 - b01) + 4.0 * a01 * b10;
    if (!(disc < 0.0)) throw InvalidArgument("efocus_alpha1: linear part is not a focus");
    return std::exp(std::numbers::pi * (a10 + b01) / std::sqrt(-disc));
}

double nfocus_alpha1(double a, double b, int n, int beta) {
    if (!(a > 0.0) || n < 2) throw InvalidArgument("nfocus_alpha1: need a > 0 and n >= 2");
    double nu = 0.0;
    if (beta > n - 1) nu = 0.0;
    else if (beta == n - 1 && b * b - 4.0 * a * n < 0.0) nu = b;
    else throw InvalidArgument("nfocus_alpha1: monodromy condition violated");
    if (nu == 0.0) return 1.0;
    const auto integrand = [=](double t) {
        const double c = std::cos(t), s = std::sin(t);
        const double cn = std::pow(c, n);
        return nu * s * s * std::pow(c, n - 1) / ((a * cn * cn + n * s * s) + nu * cn * s);
    };
    return std::exp(integrate(integrand, 0.0, std::numbers::pi, 1e-10, 1e-15).value);
}

GasullCoeffs gasull_coeffs(const PolarEval& A, const PolarEval& B, int m) {
    constexpr double h = 1e-3;
    const auto F = [&](double r, double t) { return A(r, t) / B(r, t); };
    // Richardson-extrapolated central differences in r at r = 0.
    const auto c1 = [&](double t) {
        const auto d = [&](double hh) { return (F(hh, t) - F(-hh, t)) / (2.0 * hh); };
        return (4.0 * d(0.5 * h) - d(h)) / 3.0;
    };
    const auto c2 = [&](double t) {
        const auto d = [&](double hh) { return (F(hh, t) + F(-hh, t)) / (2.0 * hh * hh); };
        return (4.0 * d(0.5 * h) - d(h)) / 3.0;
    };
    const auto b0 = [&](double t) {
        const auto d = [&](double hh) { return 0.5 * (B(hh, t) + B(-hh, t)); };
        return (4.0 * d(0.5 * h) - d(h)) / 3.0;
    };
    const auto b1 = [&](double t) {
        const auto d = [&](double hh) { return (B(hh, t) - B(-hh, t)) / (2.0 * hh); };
        return (4.0 * d(0.5 * h) - d(h)) / 3.0;
    };
    for (int k = 0; k <= 64; ++k) {
        const double t = std::numbers::pi * k / 64.0;
        if (!(b0(t) > 0.0)) throw NumericalError("gasull_coeffs: B(0, theta) is not positive");
    }

    // State: ln r1, integral of C2 r1, time integrand, first-order time correction.
    const rk::Rhs<4> rhs = [&](double t, const rk::State<4>& u, rk::State<4>& du) {
        const double r1 = std::exp(u[0]);
        const double B0 = b0(t);
        const double w = 1.0 / (std::pow(r1, m) * B0);
        du[0] = c1(t);
        du[1] = c2(t) * r1;
        du[2] = w;
        du[3] = -(r1 * b1(t) / B0 + m * u[1]) * w;
    };
    rk::Tolerances<4> tol;
    tol.rel = 1e-12;
    tol.abs = {1e-14, 1e-14, 1e-14, 1e-14};
    const auto end = rk::solve<4>(rhs, 0.0, std::numbers::pi, {0.0, 0.0, 0.0, 0.0}, tol);
    const double r1 = std::exp(end[0]);
    return {r1, r1 * end[1], end[2], end[3]};
}

Blowup polar_blowup(const PlanarField& field, int p, int q, int m) {
    if (p < 1 || q < 1) throw InvalidArgument("polar_blowup: weights must be positive");
    Blowup out;
    out.p = p;
    out.q = q;
    out.m = m;
    const auto rdot = [field, p, q](double r, double t) {
        const double c = std::cos(t), s = std::sin(t);
        const double rp = std::pow(r, p), rq = std::pow(r, q);
        const Vec2 v = field({rp * c, rq * s});
        return (rq * c * v.x + rp * s * v.y) / (std::pow(r, p + q - 1) * (p * c * c + q * s * s));
    };
    const auto tdot = [field, p, q](double r, double t) {
        const double c = std::cos(t), s = std::sin(t);
        const double rp = std::pow(r, p), rq = std::pow(r, q);
        const Vec2 v = field({rp * c, rq * s});
        return (p * rp * c * v.y - q * rq * s * v.x) / (std::pow(r, p + q) * (p * c * c + q * s * s));
    };
    const double probe = tdot(1e-4, 0.5 * std::numbers::pi) / std::pow(1e-4, m);
    const double sgn = probe < 0.0 ? -1.0 : 1.0;
    out.reversed = probe < 0.0;
    out.A = [rdot, m, sgn](double r, double t) { return sgn * rdot(r, t) / std::pow(r, m); };
    out.B = [tdot, m, sgn](double r, double t) { return sgn * tdot(r, t) / std::pow(r, m); };
    return out;
}

namespace {

struct Weights {
    int p, q, m;
};

Weights weights_for(const ComponentClass& c) {
    switch (c.kind) {
        case ComponentKind::Fold: return {1, c.multiplicity, -1};
        case ComponentKind::EFocus: return {1, 1, 0};
        case ComponentKind::NFocus: return {1, c.n, c.n - 1};
        case ComponentKind::Cusp: return {2 * c.n + 1, 2, 2 * c.n - 1};
        default: break;
    }
    throw InvalidArgument("no quasi-homogeneous weights for component " + to_string(c.kind));
}

}  // namespace

SideAsymptotics side_asymptotics(const Component& component, Half side) {
    SideAsymptotics out;
    if (const auto* m = std::get_if<ModelProvider>(&component.provider)) {
        out.dulac = m->map.is_dulac();
        out.alpha = m->map.leading_coeff();
        out.r = m->map.leading_exponent();
        out.flight = m->flight;
        return out;
    }
    const auto& f = std::get<FlowProvider>(component.provider);
    if (!component.declared) throw InvalidArgument("side_asymptotics: flow component without a declared class");
    const ComponentClass& cls = *component.declared;
    const PlanarField field = side == Half::Upper ? f.field : f.field.reflected();
    if (cls.kind == ComponentKind::PeriodicOrbit) {
        out.alpha = -1.0;
        if (cls.period) {
            const int s = sign_of(field.Q()(1e-3, 0.0));
            out.flight = ModelFlight::constant(*cls.period, 0.0, 1.0, s);
        }
        return out;
    }
    const Weights w = weights_for(cls);
    const Blowup bl = polar_blowup(field, w.p, w.q, w.m);
    const GasullCoeffs g = gasull_coeffs(bl.A, bl.B, w.m);
    out.gasull = g;
    out.dulac = cls.kind == ComponentKind::Cusp;
    out.alpha = -std::pow(g.r1_pi, w.p);
    out.r = 1.0;
    const int sign = bl.reversed ? -1 : 1;
    const double e = -static_cast<double>(w.m) / w.p;
    if (e > 0.0) out.flight = ModelFlight::constant(0.0, g.T_hat_0, e, sign);
    else if (e == 0.0) out.flight = ModelFlight::constant(g.T_hat_0, g.T_hat_prime_0, 1.0 / w.p, sign);
    else out.flight = ModelFlight::power(g.T_hat_0, e, sign);
    return out;
}

namespace {

struct Term {
    enum Kind { Pow, Log, Const } kind;
    double coef;
    double exponent;
};

// |tau| evaluated at A |b|^e.
std::vector<Term> compose(const ModelFlight& f, double A, double e) {
    switch (f.form) {
        case ModelFlight::Form::Power: return {{Term::Pow, f.T0 * std::pow(A, f.exponent), e * f.exponent}};
        case ModelFlight::Form::Log: return {{Term::Log, f.T0 * e, 0.0}, {Term::Const, -f.T0 * std::log(A), 0.0}};
        case ModelFlight::Form::Constant: break;
    }
    std::vector<Term> out;
    if (f.T0 != 0.0) out.push_back({Term::Const, f.T0, 0.0});
    if (f.correction != 0.0) out.push_back({Term::Pow, f.correction * std::pow(A, f.exponent), e * f.exponent});
    return out;
}

// Leading behavior (coefficient, exponent) of the upper entry abscissa x - b.
std::pair<double, double> upper_argument(const AsymptoticLaw& pos, const PeriodContext& ctx) {
    const double c = pos.coefficient, lam = pos.exponent;
    if (lam < 1.0 && !close(lam, 1.0)) return {c, lam};
    if (close(lam, 1.0) && std::abs(c - ctx.mu) > 1e-9) return {std::abs(c - ctx.mu), 1.0};
    if (lam > 1.0 && !close(lam, 1.0) && ctx.mu == -1) return {1.0, 1.0};
    // Leading terms cancel: recover x - b from phi+(x - b) = phi-(x) - b.
    const double am = ctx.lower.alpha, rm = ctx.lower.r;
    const double e_low = lam * rm;
    double ycoef = 0.0, yexp = 0.0;
    if (close(e_low, 1.0)) {
        ycoef = am * std::pow(c, rm) - ctx.mu;
        yexp = 1.0;
    } else if (e_low < 1.0) {
        ycoef = am * std::pow(c, rm);
        yexp = e_low;
    } else {
        ycoef = -static_cast<double>(ctx.mu);
        yexp = 1.0;
    }
    if (!(ycoef < 0.0)) throw NumericalError("period composition: upper landing point has the wrong sign");
    const DulacInverse inv = dulac_invert_leading(ctx.upper.alpha, ctx.upper.r);
    return {inv.kappa * std::pow(-ycoef, inv.rho), yexp * inv.rho};
}

}  // namespace

AsymptoticLaw predict_period_law(const ComponentClass& up, const ComponentClass& down, const AsymptoticLaw& position,
                                 const ModelFlight& flight_up, const ModelFlight& flight_down,
                                 const std::optional<PeriodContext>& context) {
    (void)up;
    (void)down;
    auto [cu, eu] = context ? upper_argument(position, *context)
                            : std::pair<double, double>{position.coefficient, position.exponent};
    std::vector<Term> terms = compose(flight_up, cu, eu);
    for (const Term& t : compose(flight_down, position.coefficient, position.exponent)) terms.push_back(t);

    AsymptoticLaw law;
    law.of = LawOf::Period;
    law.provenance = Provenance::Predicted;
    law.case_tag = "composed";
    law.anchor = "flight times composed with the position law";
    double min_exp = 0.0, log_slope = 0.0, constant = 0.0;
    bool any_log = false;
    for (const Term& t : terms) {
        if (t.kind == Term::Pow) min_exp = std::min(min_exp, t.exponent);
        if (t.kind == Term::Log) {
            any_log = true;
            log_slope += t.coef;
        }
        if (t.kind == Term::Const) constant += t.coef;
    }
    const auto sum_at = [&](double e) {
        double s = 0.0;
        for (const Term& t : terms)
            if (t.kind == Term::Pow && close(t.exponent, e)) s += t.coef;
        return s;
    };
    if (min_exp < 0.0) {
        law.family = LawFamily::NegPower;
        law.exponent = min_exp;
        law.coefficient = sum_at(min_exp);
    } else if (any_log) {
        law.family = LawFamily::Log;
        law.coefficient = log_slope;
        law.offset = constant;
    } else {
        double e_small = std::numeric_limits<double>::infinity();
        for (const Term& t : terms)
            if (t.kind == Term::Pow && t.exponent > 0.0) e_small = std::min(e_small, t.exponent);
        if (constant > 0.0) {
            law.family = LawFamily::Constant;
            law.coefficient = constant;
            law.exponent = std::isfinite(e_small) ? e_small : 1.0;
            law.offset = std::isfinite(e_small) ? sum_at(e_small) : 0.0;
        } else {
            if (!std::isfinite(e_small)) throw NumericalError("period composition: no nonzero flight terms");
            law.family = LawFamily::Power;
            law.exponent = e_small;
            law.coefficient = sum_at(e_small);
        }
    }
    law.validate();
    return law;
}

}  // namespace pseudohopf
