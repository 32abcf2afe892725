#include "pseudohopf/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pseudohopf/error.hpp"

namespace pseudohopf {

const std::vector<TableRowSpec>& table_rows() {
    static const std::vector<TableRowSpec> rows = {
        {"fold_fold", "fold_fold_broken", {}, {1e-2, 0.5, 20}, {0.02, 0.02}},
        {"efocus_fold", "efocus_fold", {}, {1e-2, 0.5, 20}, {0.02, 0.02}},
        {"nfocus_fold", "nfocus_fold", {}, {1e-2, 0.5, 20}, {0.03, 0.03}},
        {"cusp_fold", "cusp_fold_broken", {}, {1e-2, 0.5, 20}, {0.05, 0.05}},
        {"orbit_fold", "circle_orbit_fold", {}, {1e-2, 0.5, 20}, {0.02, 0.01}},
        // Dulac remainders decay like a small power of |b|; the model rows need deep grids.
        {"polycycle_fold", "model_polycycle_fold", {}, {1e-8, 0.5, 30}, {0.02, 0.02}},
        {"polycycle_polycycle", "model_polycycle_polycycle", {}, {1e-20, 0.5, 30}, {0.01, 0.02}},
    };
    return rows;
}

std::vector<TableRowSpec> select_rows(const std::vector<std::string>& ids) {
    if (ids.empty()) return table_rows();
    std::vector<TableRowSpec> out;
    for (const std::string& id : ids) {
        bool found = false;
        for (const TableRowSpec& r : table_rows())
            if (r.id == id) {
                out.push_back(r);
                found = true;
            }
        if (!found) throw ConfigError("unknown table row '" + id + "'");
    }
    return out;
}

namespace {

bool same_family(LawFamily a, LawFamily b) { return a == b; }

FitResult fit_family(LawFamily family, std::span<const Sample> s) {
    switch (family) {
        case LawFamily::Log: return fit_log(s);
        case LawFamily::Constant: return fit_constant(s);
        case LawFamily::Power:
        case LawFamily::NegPower: break;
    }
    return fit_power(s);
}

void check_law(LawCheck& c, LawOf of, std::span<const Sample> window, const CompareTolerances& tol) {
    c.fitted = fit_family(c.table.family, window);
    c.fitted->law.of = of;
    try {
        c.classified = classify_law(window).law.family;
        const bool ok = same_family(*c.classified, c.table.family);
        c.checks.push_back({ok, "classified family " + to_string(*c.classified) + ", table family " +
                                    to_string(c.table.family)});
    } catch (const Error& e) {
        c.checks.push_back({false, std::string("classification failed: ") + e.what()});
    }
    if (c.table.exponent) {
        const double d = std::abs(c.fitted->law.exponent - *c.table.exponent);
        std::ostringstream msg;
        msg.precision(6);
        msg << "table exponent " << *c.table.exponent << " (" << c.table.symbol << "), fitted "
            << c.fitted->law.exponent << ", tol " << tol.exponent;
        c.checks.push_back({d <= tol.exponent, msg.str()});
    }
    if (c.predicted) c.checks.push_back(compare(*c.predicted, *c.fitted, tol));
    c.pass = !c.checks.empty();
    for (const Verdict& v : c.checks) c.pass = c.pass && v.pass;
}

}  // namespace

TableRowResult run_table_row(const TableRowSpec& spec, double fit_window_fraction, int threads) {
    TableRowResult out;
    out.spec = spec;
    out.label = spec.id;
    try {
        const PiecewiseSystem system = make_builtin(spec.system, spec.params);
        const ComponentClass up = system.upper.declared.value_or(ComponentClass{});
        const ComponentClass down = system.lower.declared.value_or(ComponentClass{});
        const SystemPrediction pred = predict_system(system);
        const std::optional<int> N = pred.leading && pred.leading->case_tag != "dulac"
                                         ? std::optional<int>(static_cast<int>(pred.leading->exponent))
                                         : std::nullopt;
        const TableLaw tl = table_law(up, down, N);
        out.label = tl.row;
        out.notes = pred.notes;
        out.period.table = tl.period;
        out.position.table = tl.position;
        out.period.predicted = pred.period;
        out.position.predicted = pred.position;

        const SweepResult sw = sweep(system, spec.grid, pred.signs.mu, threads);
        sw.require_successes(8);
        if (!sw.failures.empty()) out.notes.push_back(std::to_string(sw.failures.size()) + " sweep points failed");
        const auto pos = asymptotic_window(position_samples(sw), fit_window_fraction);
        const auto per = asymptotic_window(period_samples(sw), fit_window_fraction);
        check_law(out.period, LawOf::Period, per, spec.tolerances);
        check_law(out.position, LawOf::Position, pos, spec.tolerances);
        out.pass = out.period.pass && out.position.pass;
    } catch (const Error& e) {
        out.errored = true;
        out.error = e.what();
    }
    return out;
}

namespace {

Json to_json(const LawCheck& c) {
    Json j;
    j["table"] = {{"law_family", to_string(c.table.family)},
                  {"exponent", c.table.exponent ? Json(*c.table.exponent) : Json(nullptr)},
                  {"symbol", c.table.symbol}};
    j["predicted"] = c.predicted ? pseudohopf::to_json(*c.predicted) : Json(nullptr);
    j["fitted"] = c.fitted ? pseudohopf::to_json(*c.fitted) : Json(nullptr);
    j["classified"] = c.classified ? Json(to_string(*c.classified)) : Json(nullptr);
    Json checks = Json::array();
    for (const Verdict& v : c.checks) checks.push_back(pseudohopf::to_json(v));
    j["checks"] = checks;
    j["pass"] = c.pass;
    return j;
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

Json to_json(const TableRowResult& row) {
    Json j;
    j["id"] = row.spec.id;
    j["system"] = row.spec.system;
    j["row"] = row.label;
    j["grid"] = to_json(row.spec.grid);
    j["tolerances"] = {{"exponent", row.spec.tolerances.exponent},
                       {"coefficient", row.spec.tolerances.coefficient}};
    j["status"] = row.errored ? "error" : "ok";
    j["error"] = row.errored ? Json(row.error) : Json(nullptr);
    j["period"] = to_json(row.period);
    j["position"] = to_json(row.position);
    j["notes"] = row.notes;
    j["verdict"] = row.errored ? "error" : row.pass ? "pass" : "fail";
    return j;
}

std::string table_csv(const std::vector<TableRowResult>& rows) {
    std::string out =
        "id,row,period_family,period_exponent_table,period_exponent_fit,period_coefficient_pred,"
        "period_coefficient_fit,position_exponent_table,position_exponent_fit,position_coefficient_pred,"
        "position_coefficient_fit,verdict\n";
    for (const TableRowResult& r : rows) {
        const auto fit_e = [](const LawCheck& c) {
            return c.fitted ? std::optional<double>(c.fitted->law.exponent) : std::nullopt;
        };
        const auto fit_c = [](const LawCheck& c) {
            return c.fitted ? std::optional<double>(c.fitted->law.coefficient) : std::nullopt;
        };
        const auto pred_c = [](const LawCheck& c) {
            return c.predicted ? std::optional<double>(c.predicted->coefficient) : std::nullopt;
        };
        out += r.spec.id + ',' + r.label + ',' + to_string(r.period.table.family) + ',' + opt(r.period.table.exponent) +
               ',' + opt(fit_e(r.period)) + ',' + opt(pred_c(r.period)) + ',' + opt(fit_c(r.period)) + ',' +
               opt(r.position.table.exponent) + ',' + opt(fit_e(r.position)) + ',' + opt(pred_c(r.position)) + ',' +
               opt(fit_c(r.position)) + ',' + (r.errored ? "error" : r.pass ? "pass" : "fail") + '\n';
    }
    return out;
}

std::string render_table(const std::vector<TableRowResult>& rows) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-22s %-10s %8s %10s   %-6s %8s %10s   %s\n", "row", "pair", "period",
                  "table", "fitted", "pos", "table", "fitted", "verdict");
    out += line;
    const auto cell = [](const std::optional<double>& v) {
        char b[32];
        if (v) std::snprintf(b, sizeof b, "%.4f", *v);
        else std::snprintf(b, sizeof b, "-");
        return std::string(b);
    };
    for (const TableRowResult& r : rows) {
        if (r.errored) {
            std::snprintf(line, sizeof line, "%-20s %-22s error: %s\n", r.spec.id.c_str(), r.label.c_str(),
                          r.error.c_str());
            out += line;
            continue;
        }
        const auto fe = [](const LawCheck& c) {
            if (!c.fitted) return std::optional<double>{};
            return std::optional<double>(c.fitted->law.family == LawFamily::Power ||
                                                 c.fitted->law.family == LawFamily::NegPower
                                             ? c.fitted->law.exponent
                                             : c.fitted->law.coefficient);
        };
        const std::string pt = r.period.table.exponent ? cell(r.period.table.exponent) : r.period.table.symbol;
        const std::string xt = r.position.table.exponent ? cell(r.position.table.exponent) : r.position.table.symbol;
        std::snprintf(line, sizeof line, "%-20s %-22s %-10s %8s %10s   %-6s %8s %10s   %s\n", r.spec.id.c_str(),
                      r.label.c_str(), to_string(r.period.table.family).c_str(), pt.c_str(),
                      cell(fe(r.period)).c_str(), "power", xt.c_str(), cell(fe(r.position)).c_str(),
                      r.pass ? "pass" : "fail");
        out += line;
    }
    return out;
}

}  // namespace pseudohopf
