#include "pseudohopf/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pseudohopf/error.hpp"

namespace pseudohopf {

namespace {

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!allowed.contains(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
T get(const Json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("bad value for '") + key + "' in " + where);
    }
}

Poly2 poly_from(const Json& j, const std::string& where) {
    try {
        return Poly2(j.get<std::vector<std::vector<double>>>());
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + " must be an array of coefficient rows");
    } catch (const InvalidArgument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

ComponentClass class_from(const Json& j) {
    only_keys(j, {"kind", "multiplicity", "n", "a", "b", "beta", "case_ii", "graphic_number", "ratio", "period"},
              "class");
    ComponentClass c;
    try {
        c.kind = component_kind_from_string(get<std::string>(j, "kind", "", "class"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    c.multiplicity = get(j, "multiplicity", c.multiplicity, "class");
    c.n = get(j, "n", c.n, "class");
    c.a = get(j, "a", c.a, "class");
    c.b = get(j, "b", c.b, "class");
    c.beta = get(j, "beta", c.beta, "class");
    c.andreev_case_ii = get(j, "case_ii", c.andreev_case_ii, "class");
    c.graphic_number = get(j, "graphic_number", c.graphic_number, "class");
    c.ratio = get(j, "ratio", c.ratio, "class");
    if (j.contains("period")) c.period = get(j, "period", 0.0, "class");
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("class: ") + e.what());
    }
    return c;
}

ModelFlight flight_from(const Json& j) {
    only_keys(j, {"form", "T0", "correction", "exponent", "sign"}, "tau");
    const std::string form = get<std::string>(j, "form", "", "tau");
    const double T0 = get(j, "T0", 0.0, "tau");
    const int sign = get(j, "sign", 1, "tau");
    try {
        if (form == "constant")
            return ModelFlight::constant(T0, get(j, "correction", 0.0, "tau"), get(j, "exponent", 1.0, "tau"), sign);
        if (form == "power") return ModelFlight::power(T0, get(j, "exponent", -1.0, "tau"), sign);
        if (form == "log") return ModelFlight::log(T0, sign);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("tau: ") + e.what());
    }
    throw ConfigError("tau form must be constant, power or log");
}

ModelMap map_from(const Json& j) {
    only_keys(j, {"form", "alpha", "r", "c2", "ell", "coeffs"}, "phi");
    const std::string form = get<std::string>(j, "form", "", "phi");
    try {
        if (form == "dulac")
            return ModelMap(DulacLeading{get(j, "alpha", -1.0, "phi"), get(j, "r", 1.0, "phi"), get(j, "c2", 0.0, "phi"),
                                         get(j, "ell", 1.0, "phi")});
        if (form == "series") return ModelMap(SmoothSeries{get(j, "coeffs", std::vector<double>{-1.0}, "phi")});
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("phi: ") + e.what());
    }
    throw ConfigError("phi form must be dulac or series");
}

Component component_from(const Json& j, const IntegrationLimits& limits, const std::string& where) {
    only_keys(j, {"backend", "P", "Q", "class", "first_integral", "phi", "tau"}, where);
    Component c;
    if (j.contains("class")) c.declared = class_from(j.at("class"));
    const std::string backend = get<std::string>(j, "backend", "", where);
    if (backend == "flow") {
        if (!j.contains("P") || !j.contains("Q")) throw ConfigError(where + ": flow backend needs P and Q");
        if (j.contains("phi") || j.contains("tau")) throw ConfigError(where + ": phi/tau belong to the model backend");
        c.provider = FlowProvider{PlanarField(poly_from(j.at("P"), "P"), poly_from(j.at("Q"), "Q")), limits};
        if (j.contains("first_integral")) c.first_integral = poly_from(j.at("first_integral"), "first_integral");
    } else if (backend == "model") {
        if (!j.contains("phi") || !j.contains("tau")) throw ConfigError(where + ": model backend needs phi and tau");
        if (j.contains("P") || j.contains("Q") || j.contains("first_integral"))
            throw ConfigError(where + ": P/Q belong to the flow backend");
        c.provider = ModelProvider{map_from(j.at("phi")), flight_from(j.at("tau"))};
    } else {
        throw ConfigError(where + ": backend must be flow or model");
    }
    return c;
}

}  // namespace

PiecewiseSystem system_from_descriptor(const Json& j, const IntegrationLimits& limits) {
    only_keys(j, {"name", "upper", "lower", "window"}, "system");
    if (!j.contains("upper") || !j.contains("lower")) throw ConfigError("system needs upper and lower");
    PiecewiseSystem s;
    s.name = get<std::string>(j, "name", "custom", "system");
    s.upper = component_from(j.at("upper"), limits, "upper");
    s.lower = component_from(j.at("lower"), limits, "lower");
    if (j.contains("window")) {
        const auto w = get<std::vector<double>>(j, "window", {}, "system");
        if (w.size() != 2) throw ConfigError("window must be [x_floor, x0]");
        s.window = {w[0], w[1]};
    }
    finalize_system(s);
    return s;
}

void RunConfig::validate() const {
    if (gallery.has_value() == descriptor.has_value())
        throw ConfigError("config needs exactly one of a gallery name or an inline system");
    if (!(fit_window_fraction > 0.0 && fit_window_fraction <= 1.0))
        throw ConfigError("fit_window_fraction must lie in (0, 1]");
    if (!(tolerances.exponent > 0.0 && tolerances.coefficient > 0.0))
        throw ConfigError("tolerances must be positive");
    try {
        grid.validate();
        limits.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

RunConfig parse_config(const Json& j) {
    only_keys(j, {"gallery", "system", "params", "limits", "grid", "tolerances", "fit_window_fraction", "output"},
              "config");
    RunConfig c;
    if (j.contains("gallery")) c.gallery = get<std::string>(j, "gallery", "", "config");
    if (j.contains("system")) c.descriptor = j.at("system");
    if (j.contains("params")) {
        const Json& p = j.at("params");
        if (!p.is_object()) throw ConfigError("params must be an object");
        for (const auto& [k, v] : p.items()) {
            if (!v.is_number()) throw ConfigError("parameter '" + k + "' must be a number");
            c.params[k] = v.get<double>();
        }
    }
    if (j.contains("limits")) {
        const Json& l = j.at("limits");
        only_keys(l, {"rel_tol", "abs_tol", "t_max", "max_steps", "event_tol"}, "limits");
        c.limits.rel_tol = get(l, "rel_tol", c.limits.rel_tol, "limits");
        c.limits.abs_tol = get(l, "abs_tol", c.limits.abs_tol, "limits");
        c.limits.t_max = get(l, "t_max", c.limits.t_max, "limits");
        c.limits.max_steps = get(l, "max_steps", c.limits.max_steps, "limits");
        c.limits.event_tol = get(l, "event_tol", c.limits.event_tol, "limits");
    }
    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        only_keys(g, {"b_max", "ratio", "count"}, "grid");
        c.grid.b_max = get(g, "b_max", c.grid.b_max, "grid");
        c.grid.ratio = get(g, "ratio", c.grid.ratio, "grid");
        c.grid.count = get(g, "count", c.grid.count, "grid");
    }
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        only_keys(t, {"exponent", "coefficient"}, "tolerances");
        c.tolerances.exponent = get(t, "exponent", c.tolerances.exponent, "tolerances");
        c.tolerances.coefficient = get(t, "coefficient", c.tolerances.coefficient, "tolerances");
    }
    c.fit_window_fraction = get(j, "fit_window_fraction", c.fit_window_fraction, "config");
    if (j.contains("output")) {
        only_keys(j.at("output"), {"dir"}, "output");
        c.out_dir = get<std::string>(j.at("output"), "dir", c.out_dir, "output");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_config(Json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

PiecewiseSystem build_system(const RunConfig& config) {
    config.validate();
    if (config.gallery) return make_builtin(*config.gallery, config.params, config.limits);
    if (!config.params.empty()) throw ConfigError("params apply to gallery systems only");
    return system_from_descriptor(*config.descriptor, config.limits);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

namespace {

// JSON has no NaN or infinity; they become null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const AsymptoticLaw& law) {
    Json j;
    j["law_family"] = to_string(law.family);
    j["of"] = to_string(law.of);
    j["provenance"] = to_string(law.provenance);
    j["coefficient"] = num(law.coefficient);
    j["exponent"] = num(law.exponent);
    j["offset"] = num(law.offset);
    j["remainder_order"] = law.remainder_order ? num(*law.remainder_order) : Json(nullptr);
    j["case_tag"] = law.case_tag;
    j["paper_anchor"] = law.anchor;
    return j;
}

Json to_json(const SignTriple& s) { return {{"delta", s.delta}, {"sigma", s.sigma}, {"mu", s.mu}}; }

Json to_json(const CycleRecord& r) {
    Json roots = Json::array();
    for (double x : r.other_roots) roots.push_back(num(x));
    return {{"b", num(r.b)},
            {"x_star", num(r.x_star)},
            {"upper_entry", num(r.upper_entry)},
            {"period", num(r.period)},
            {"stability", to_string(r.stability)},
            {"delta_residual", num(r.delta_residual)},
            {"bracket", {num(r.bracket_lo), num(r.bracket_hi)}},
            {"other_roots", roots}};
}

Json to_json(const SlidingSegment& s) {
    return {{"lo", num(s.lo)}, {"hi", num(s.hi)}, {"attractivity", to_string(s.attractivity)}};
}

Json to_json(const FitResult& f) {
    return {{"law", to_json(f.law)},
            {"r_squared", num(f.r_squared)},
            {"max_rel_residual", num(f.max_rel_residual)},
            {"window", {num(f.window.first), num(f.window.second)}},
            {"margin", num(f.margin)},
            {"ambiguous", f.ambiguous}};
}

Json to_json(const Verdict& v) { return {{"pass", v.pass}, {"details", v.details}}; }

Json to_json(const ModelFlight& f) {
    const char* form = f.form == ModelFlight::Form::Log ? "log" : f.form == ModelFlight::Form::Power ? "power"
                                                                                                      : "constant";
    return {{"form", form},
            {"T0", num(f.T0)},
            {"correction", num(f.correction)},
            {"exponent", num(f.exponent)},
            {"sign", f.sign}};
}

Json to_json(const SideAsymptotics& s) {
    Json j{{"dulac", s.dulac}, {"alpha", num(s.alpha)}, {"r", num(s.r)}};
    j["flight"] = s.flight ? to_json(*s.flight) : Json(nullptr);
    if (s.gasull)
        j["gasull"] = {{"r1_pi", num(s.gasull->r1_pi)},
                       {"r2_pi", num(s.gasull->r2_pi)},
                       {"T_hat_0", num(s.gasull->T_hat_0)},
                       {"T_hat_prime_0", num(s.gasull->T_hat_prime_0)}};
    else
        j["gasull"] = nullptr;
    return j;
}

Json to_json(const SystemPrediction& p) {
    Json j;
    j["signs"] = to_json(p.signs);
    j["upper"] = to_json(p.upper);
    j["lower"] = to_json(p.lower);
    if (p.leading)
        j["leading"] = {{"V", num(p.leading->V)}, {"exponent", num(p.leading->exponent)},
                        {"case_tag", p.leading->case_tag}};
    else
        j["leading"] = nullptr;
    if (p.dulac)
        j["dulac"] = {{"V1", num(p.dulac->V1)},
                      {"mu", p.dulac->mu},
                      {"mixed", p.dulac->mixed},
                      {"coefficient_exact", p.dulac->coefficient_exact},
                      {"case_tag", p.dulac->case_tag}};
    else
        j["dulac"] = nullptr;
    j["position"] = p.position ? to_json(*p.position) : Json(nullptr);
    j["period"] = p.period ? to_json(*p.period) : Json(nullptr);
    j["notes"] = p.notes;
    return j;
}

Json to_json(const Grid& g) { return {{"b_max", num(g.b_max)}, {"ratio", num(g.ratio)}, {"count", g.count}}; }

std::string sweep_csv(const SweepResult& result) {
    std::string out = "b,x_star,period,stability,delta_residual\n";
    for (const CycleRecord& r : result.samples) {
        out += format_double(r.b) + ',' + format_double(r.x_star) + ',' + format_double(r.period) + ',' +
               to_string(r.stability) + ',' + format_double(r.delta_residual) + '\n';
    }
    return out;
}

std::string plot_data(std::span<const Sample> samples) {
    std::string out = "# ln_abs_b ln_value neg_ln_abs_b value\n";
    for (const Sample& s : samples) {
        const double lb = std::log(std::abs(s.b));
        const double lv = s.value > 0.0 ? std::log(s.value) : std::nan("");
        out += format_double(lb) + ' ' + format_double(lv) + ' ' + format_double(-lb) + ' ' + format_double(s.value) +
               '\n';
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace pseudohopf
