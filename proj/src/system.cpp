#include "pseudohopf/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pseudohopf/error.hpp"
#include "pseudohopf/numerics.hpp"

namespace pseudohopf {

namespace {

// Newton on H(., 0) = H(x_start, 0) from the integrated landing point. The
// constant term is dropped so small levels keep their relative precision.
double project_on_level(const Poly2& H, double start, double landing) {
    const auto g = [&H](double x) {
        double v = 0.0;
        for (int i = H.rows() - 1; i >= 1; --i) v = (v + H.coeff(i, 0)) * x;
        return v;
    };
    const auto dg = [&H](double x) {
        double d = 0.0;
        for (int i = H.rows() - 1; i >= 1; --i) d = d * x + i * H.coeff(i, 0);
        return d;
    };
    const double level = g(start);
    double x = landing;
    for (int it = 0; it < 8; ++it) {
        const double d = dg(x);
        if (d == 0.0) break;
        const double step = (g(x) - level) / d;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::abs(x)) break;
    }
    if (!(std::abs(x - landing) <= 1e-2 * std::abs(landing)))
        throw NumericalError("landing point disagrees with the declared first integral");
    return x;
}

}  // namespace

ReturnData half_return(const PiecewiseSystem& system, Half side, double x) {
    const Component& c = system.side(side);
    ReturnData out = half_return(c.provider, side, x);
    if (c.first_integral && std::holds_alternative<FlowProvider>(c.provider))
        out.phi = project_on_level(*c.first_integral, x, out.phi);
    return out;
}

void validate_h1(const PiecewiseSystem& system) {
    const Window& w = system.window;
    if (!(w.x_floor > 0.0) || !(w.x0 > w.x_floor)) throw InvalidArgument("window must satisfy 0 < x_floor < x0");
    // Interior points only: the window endpoints are open.
    const auto xs = geomspace(w.x_floor, w.x0, 10);
    for (size_t i = 1; i + 1 < xs.size(); ++i) {
        const ReturnData up = half_return(system, Half::Upper, xs[i]);
        const ReturnData lo = half_return(system, Half::Lower, xs[i]);
        if (sign_of(up.tau) * sign_of(lo.tau) != -1)
            throw NumericalError("H1 check failed: flight times share a sign at x = " + std::to_string(xs[i]));
    }
}

void finalize_system(PiecewiseSystem& system) {
    for (Half h : {Half::Upper, Half::Lower}) {
        Component* c = h == Half::Upper ? &system.upper : &system.lower;
        if (const auto* f = std::get_if<FlowProvider>(&c->provider)) {
            // Classes are stated in the side's own frame.
            const PlanarField own = h == Half::Upper ? f->field : f->field.reflected();
            if (c->declared) c->declared = classify_component(own, *c->declared);
        } else if (c->declared) {
            c->declared->validate();
            c->declared->validation = Validation::NoCheckAvailable;
        }
    }
    validate_h1(system);
}

namespace {

double param(const Params& p, const std::string& key, const Params& defaults) {
    for (const auto& [k, v] : p)
        if (!defaults.contains(k)) throw ConfigError("unknown parameter '" + k + "'");
    if (auto it = p.find(key); it != p.end()) return it->second;
    return defaults.at(key);
}

Component flow(PlanarField f, ComponentClass cls, const IntegrationLimits& lim, std::optional<Poly2> H = {}) {
    return {FlowProvider{std::move(f), lim}, cls, std::move(H)};
}

// Lower fold (1, 2x): symmetric partner of the upper (-1, 2x).
PlanarField lower_fold() { return {Poly2({{1.0}}), Poly2({{0.0}, {2.0}})}; }
// Lower fold (1, 2x + 3x^2): quadratic asymmetry.
PlanarField lower_fold_broken() { return {Poly2({{1.0}}), Poly2({{0.0}, {2.0}, {3.0}})}; }
Poly2 lower_fold_H() { return Poly2({{0.0, 1.0}, {0.0, 0.0}, {-1.0, 0.0}}); }
Poly2 lower_fold_broken_H() { return Poly2({{0.0, 1.0}, {0.0, 0.0}, {-1.0, 0.0}, {-1.0, 0.0}}); }

PlanarField upper_fold() { return {Poly2({{-1.0}}), Poly2({{0.0}, {2.0}})}; }
Poly2 upper_fold_H() { return Poly2({{0.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}}); }

PlanarField focus(double eps) { return {Poly2({{0.0, -1.0}, {eps, 0.0}}), Poly2({{0.0, eps}, {1.0, 0.0}})}; }

Component model(ModelMap map, ModelFlight flight, ComponentClass cls) {
    return {ModelProvider{std::move(map), flight}, cls, std::nullopt};
}

const Params kNone{};

}  // namespace

const std::vector<GalleryEntry>& gallery() {
    static const std::vector<GalleryEntry> entries = {
        {"fold_fold_sym", "upper (-1, 2x), lower (1, 2x): annular center", kNone},
        {"fold_fold_broken", "upper (-1, 2x), lower (1, 2x+3x^2)", kNone},
        {"efocus_fold", "upper (eps x - y, x + eps y), lower (1, 2x)", {{"eps", 0.1}}},
        {"efocus_efocus", "focus (eps x - y, x + eps y) on both sides", {{"eps", 0.0}}},
        {"nfocus_fold", "upper (-y, x^3), lower (1, 2x+3x^2)", kNone},
        {"cusp_fold", "upper (-y^2, x), lower (1, 2x+3x^2)", kNone},
        {"cusp_fold_broken", "upper (-y^2 + c xy, x), lower (1, 2x+3x^2)", {{"c", 1.0}}},
        {"circle_orbit_fold", "upper (-(y-1), x) around the unit circle, lower (1, 2x+3x^2)", kNone},
        {"model_polycycle_fold", "model polycycle phi = -x^r, tau = T0 (-ln x); model fold below",
         {{"r", 1.5}, {"T0", 1.0}}},
        {"model_polycycle_polycycle", "model polycycles on both sides",
         {{"r_plus", 1.4}, {"r_minus", 1.25}, {"T0_plus", 1.0}, {"T0_minus", 1.0}}},
    };
    return entries;
}

PiecewiseSystem make_builtin(const std::string& name, const Params& params, const IntegrationLimits& limits) {
    const GalleryEntry* entry = nullptr;
    for (const auto& e : gallery())
        if (e.name == name) entry = &e;
    if (!entry) throw ConfigError("unknown gallery system '" + name + "'");
    const Params& d = entry->defaults;
    // Touch every supplied key so unknown parameters are rejected even without defaults.
    for (const auto& [k, v] : params)
        if (!d.contains(k)) throw ConfigError("unknown parameter '" + k + "' for " + name);

    PiecewiseSystem s;
    s.name = name;
    const auto fold2 = ComponentClass::fold(2);
    if (name == "fold_fold_sym") {
        s.upper = flow(upper_fold(), fold2, limits, upper_fold_H());
        s.lower = flow(lower_fold(), fold2, limits, lower_fold_H());
        s.window = {1e-6, 0.5};
    } else if (name == "fold_fold_broken") {
        s.upper = flow(upper_fold(), fold2, limits, upper_fold_H());
        s.lower = flow(lower_fold_broken(), fold2, limits, lower_fold_broken_H());
        s.window = {1e-6, 0.2};
    } else if (name == "efocus_fold") {
        const double eps = param(params, "eps", d);
        if (!(std::abs(eps) < 1.0)) throw InvalidArgument("efocus_fold requires |eps| < 1");
        std::optional<Poly2> H;
        if (eps == 0.0) H = Poly2({{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
        s.upper = flow(focus(eps), ComponentClass::efocus(), limits, H);
        s.lower = flow(lower_fold(), fold2, limits, lower_fold_H());
        s.window = {1e-9, 0.5};
    } else if (name == "efocus_efocus") {
        const double eps = param(params, "eps", d);
        if (!(std::abs(eps) < 1.0)) throw InvalidArgument("efocus_efocus requires |eps| < 1");
        std::optional<Poly2> H;
        if (eps == 0.0) H = Poly2({{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
        s.upper = flow(focus(eps), ComponentClass::efocus(), limits, H);
        s.lower = flow(focus(eps), ComponentClass::efocus(), limits, H);
        s.window = {1e-6, 0.5};
    } else if (name == "nfocus_fold") {
        const PlanarField f(Poly2({{0.0, -1.0}}), Poly2({{0.0}, {0.0}, {0.0}, {1.0}}));
        const Poly2 H({{0.0, 0.0, 0.5}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.25, 0.0, 0.0}});
        s.upper = flow(f, ComponentClass::nfocus(2, 1.0), limits, H);
        s.lower = flow(lower_fold_broken(), fold2, limits, lower_fold_broken_H());
        s.window = {1e-5, 0.2};
    } else if (name == "cusp_fold" || name == "cusp_fold_broken") {
        const double c = name == "cusp_fold" ? 0.0 : param(params, "c", d);
        const PlanarField f(Poly2({{0.0, 0.0, -1.0}, {0.0, c, 0.0}}), Poly2({{0.0}, {1.0}}));
        std::optional<Poly2> H;
        if (c == 0.0) H = Poly2({{0.0, 0.0, 0.0, 1.0 / 3.0}, {0.0, 0.0, 0.0, 0.0}, {0.5, 0.0, 0.0, 0.0}});
        s.upper = flow(f, ComponentClass::cusp(1), limits, H);
        s.lower = flow(lower_fold_broken(), fold2, limits, lower_fold_broken_H());
        s.window = {1e-9, 0.2};
    } else if (name == "circle_orbit_fold") {
        const PlanarField f(Poly2({{1.0, -1.0}}), Poly2({{0.0}, {1.0}}));
        const Poly2 H({{1.0, -2.0, 1.0}, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
        // The return after a full turn amplifies the y error by 1/x; tighten to keep phi+ at 1e-8.
        IntegrationLimits tight = limits;
        tight.rel_tol = std::min(limits.rel_tol, 1e-14);
        tight.abs_tol = std::min(limits.abs_tol, 1e-14);
        tight.event_tol = std::min(limits.event_tol, 1e-14);
        s.upper = flow(f, ComponentClass::periodic_orbit(1, 2.0 * std::numbers::pi), tight, H);
        s.lower = flow(lower_fold_broken(), fold2, limits, lower_fold_broken_H());
        s.window = {1e-5, 0.2};
    } else if (name == "model_polycycle_fold") {
        const double r = param(params, "r", d), T0 = param(params, "T0", d);
        s.upper = model(DulacLeading{-1.0, r, 0.0, 1.0}, ModelFlight::log(T0, 1), ComponentClass::polycycle(r));
        s.lower = model(SmoothSeries{{-1.0}}, ModelFlight::constant(0.0, 2.0, 1.0, -1), fold2);
        s.window = {1e-30, 0.5};
    } else {  // model_polycycle_polycycle
        const double rp = param(params, "r_plus", d), rm = param(params, "r_minus", d);
        const double tp = param(params, "T0_plus", d), tm = param(params, "T0_minus", d);
        s.upper = model(DulacLeading{-1.0, rp, 0.0, 1.0}, ModelFlight::log(tp, 1), ComponentClass::polycycle(rp));
        s.lower = model(DulacLeading{-1.0, rm, 0.0, 1.0}, ModelFlight::log(tm, -1), ComponentClass::polycycle(rm));
        s.window = {1e-30, 0.5};
    }
    finalize_system(s);
    return s;
}

}  // namespace pseudohopf
