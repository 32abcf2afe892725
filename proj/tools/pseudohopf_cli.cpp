#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pseudohopf/error.hpp"
#include "pseudohopf/io.hpp"
#include "pseudohopf/table.hpp"

using namespace pseudohopf;

namespace {

struct SystemFlags {
    std::string gallery;
    std::string config;
    std::vector<std::string> params;
    std::string grid;
    double tol_exp = 0.0;
    double tol_coef = 0.0;
    std::string out;
};

void add_system_flags(CLI::App* app, SystemFlags& f) {
    auto* g = app->add_option("--gallery", f.gallery, "builtin system name");
    auto* c = app->add_option("--config", f.config, "JSON run configuration");
    g->excludes(c);
    app->add_option("--param", f.params, "gallery parameter override key=value")->take_all();
}

Params parse_params(const std::vector<std::string>& items) {
    Params p;
    for (const std::string& s : items) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + s + "'");
        try {
            size_t used = 0;
            const double v = std::stod(s.substr(eq + 1), &used);
            if (used != s.size() - eq - 1) throw std::invalid_argument("trailing");
            p[s.substr(0, eq)] = v;
        } catch (const std::exception&) {
            throw ConfigError("--param value is not a number in '" + s + "'");
        }
    }
    return p;
}

Grid parse_grid(const std::string& s) {
    std::stringstream in(s);
    std::string a, b, c;
    if (!std::getline(in, a, ',') || !std::getline(in, b, ',') || !std::getline(in, c) )
        throw ConfigError("--grid expects bmax,q,n");
    try {
        Grid g{std::stod(a), std::stod(b), std::stoi(c)};
        g.validate();
        return g;
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    } catch (const std::exception&) {
        throw ConfigError("--grid expects bmax,q,n");
    }
}

RunConfig make_config(const SystemFlags& f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
    } else if (!f.gallery.empty()) {
        cfg.gallery = f.gallery;
    } else {
        throw ConfigError("one of --gallery or --config is required");
    }
    const Params extra = parse_params(f.params);
    for (const auto& [k, v] : extra) cfg.params[k] = v;
    if (!f.grid.empty()) cfg.grid = parse_grid(f.grid);
    if (f.tol_exp > 0.0) cfg.tolerances.exponent = f.tol_exp;
    if (f.tol_coef > 0.0) cfg.tolerances.coefficient = f.tol_coef;
    if (!f.out.empty()) cfg.out_dir = f.out;
    cfg.validate();
    return cfg;
}

std::string system_label(const RunConfig& cfg, const PiecewiseSystem& s) { return cfg.gallery ? *cfg.gallery : s.name; }

int cmd_analyze(const SystemFlags& f, double b) {
    const RunConfig cfg = make_config(f);
    const PiecewiseSystem system = build_system(cfg);
    if (b == 0.0) throw InvalidArgument("--b must be nonzero");
    Json j;
    j["system"] = system_label(cfg, system);
    j["b"] = b;
    j["signs"] = to_json(sign_data(system));
    j["sliding"] = to_json(sliding_segment(system, b));
    const CycleSearch cs = find_crossing_cycle(system, b);
    j["no_cycle"] = !cs.record.has_value();
    j["cycle"] = cs.record ? to_json(*cs.record) : Json(nullptr);
    j["scan_points"] = cs.samples;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_predict(const SystemFlags& f) {
    const RunConfig cfg = make_config(f);
    const PiecewiseSystem system = build_system(cfg);
    Json j;
    j["system"] = system_label(cfg, system);
    j["prediction"] = to_json(predict_system(system));
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const SystemFlags& f, double window_fraction) {
    RunConfig cfg = make_config(f);
    if (window_fraction > 0.0) cfg.fit_window_fraction = window_fraction;
    cfg.validate();
    const PiecewiseSystem system = build_system(cfg);

    Json report;
    report["system"] = system_label(cfg, system);
    report["grid"] = to_json(cfg.grid);
    report["fit_window_fraction"] = cfg.fit_window_fraction;

    std::optional<SystemPrediction> pred;
    try {
        pred = predict_system(system);
        report["prediction"] = to_json(*pred);
    } catch (const Error& e) {
        report["prediction"] = nullptr;
        report["prediction_error"] = e.what();
    }
    const SweepResult sw = sweep(system, cfg.grid, pred ? std::optional<int>(pred->signs.mu) : std::nullopt);
    report["sign"] = sw.sign;
    report["successes"] = sw.samples.size();
    Json failures = Json::array();
    for (const SweepFailure& fl : sw.failures)
        failures.push_back({{"b", fl.b}, {"kind", fl.kind}, {"message", fl.message}});
    report["failures"] = failures;

    const std::string dir = cfg.out_dir;
    write_text(dir + "/sweep.csv", sweep_csv(sw));
    const auto pos_all = position_samples(sw);
    const auto per_all = period_samples(sw);
    write_text(dir + "/position.dat", plot_data(pos_all));
    write_text(dir + "/period.dat", plot_data(per_all));
    sw.require_successes(8);

    const auto pos = asymptotic_window(pos_all, cfg.fit_window_fraction);
    const auto per = asymptotic_window(per_all, cfg.fit_window_fraction);
    const auto section = [&](std::span<const Sample> s, const std::optional<AsymptoticLaw>& predicted,
                             bool period) {
        const LawOf of = period ? LawOf::Period : LawOf::Position;
        Json j;
        std::optional<FitResult> cls;
        try {
            cls = classify_law(s);
            cls->law.of = of;
            j["classified"] = to_json(*cls);
        } catch (const Error& e) {
            j["classified"] = nullptr;
            j["classification_error"] = e.what();
        }
        LawFamily family = LawFamily::Power;
        if (predicted) family = predicted->family;
        else if (period && cls) family = cls->law.family;
        FitResult fit = family == LawFamily::Log        ? fit_log(s)
                        : family == LawFamily::Constant ? fit_constant(s)
                                                        : fit_power(s);
        fit.law.of = of;
        j["fit"] = to_json(fit);
        j["predicted"] = predicted ? to_json(*predicted) : Json(nullptr);
        j["verdict"] = predicted ? to_json(compare(*predicted, fit, cfg.tolerances)) : Json(nullptr);
        return j;
    };
    report["position"] = section(pos, pred ? pred->position : std::nullopt, false);
    report["period"] = section(per, pred ? pred->period : std::nullopt, true);
    write_text(dir + "/report.json", report.dump(2) + "\n");

    for (const char* key : {"position", "period"}) {
        const Json& v = report[key]["verdict"];
        std::cout << key << ": " << (v.is_null() ? "no prediction" : v["pass"].get<bool>() ? "pass" : "fail");
        if (!v.is_null()) std::cout << " (" << v["details"].get<std::string>() << ")";
        std::cout << '\n';
    }
    std::cout << "wrote " << dir << "/{sweep.csv,report.json,position.dat,period.dat}\n";
    return 0;
}

int cmd_table(const std::vector<std::string>& ids, const std::string& out) {
    std::vector<std::string> split;
    for (const std::string& s : ids) {
        std::stringstream in(s);
        for (std::string part; std::getline(in, part, ',');)
            if (!part.empty()) split.push_back(part);
    }
    const std::vector<TableRowSpec> rows = select_rows(split);
    std::vector<TableRowResult> results;
    for (const TableRowSpec& r : rows) results.push_back(run_table_row(r));
    std::cout << render_table(results);
    if (!out.empty()) {
        Json j;
        Json arr = Json::array();
        for (const auto& r : results) arr.push_back(to_json(r));
        j["rows"] = arr;
        write_text(out + "/table.json", j.dump(2) + "\n");
        write_text(out + "/table.csv", table_csv(results));
    }
    for (const auto& r : results)
        if (r.errored) return 2;
    return 0;
}

int cmd_gallery() {
    for (const GalleryEntry& e : gallery()) {
        std::cout << e.name << "  " << e.description;
        if (!e.defaults.empty()) {
            std::cout << "  [";
            bool first = true;
            for (const auto& [k, v] : e.defaults) {
                std::cout << (first ? "" : ", ") << k << "=" << Json(v).dump();
                first = false;
            }
            std::cout << "]";
        }
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crossing limit cycles born from translated piecewise-smooth planar systems"};
    app.require_subcommand(1);

    SystemFlags analyze_flags, sweep_flags, predict_flags;
    double b = 0.0;
    auto* analyze = app.add_subcommand("analyze", "sign data, sliding segment and crossing cycle at one b");
    add_system_flags(analyze, analyze_flags);
    analyze->add_option("--b", b, "translation parameter")->required();

    double window_fraction = 0.0;
    auto* sw = app.add_subcommand("sweep", "sweep b, fit position and period laws, compare with predictions");
    add_system_flags(sw, sweep_flags);
    sw->add_option("--grid", sweep_flags.grid, "sweep grid bmax,q,n");
    sw->add_option("--tol-exp", sweep_flags.tol_exp, "exponent tolerance");
    sw->add_option("--tol-coef", sweep_flags.tol_coef, "relative coefficient tolerance");
    sw->add_option("--out", sweep_flags.out, "output directory");
    sw->add_option("--fit-window", window_fraction, "fraction of smallest-|b| samples used by the fits");

    std::vector<std::string> row_ids;
    std::string table_out;
    auto* table = app.add_subcommand("table", "reproduce the verifiable rows of the leading-law table");
    table->add_option("--rows", row_ids, "row ids (comma separated)");
    table->add_option("--out", table_out, "output directory for table.csv and table.json");

    auto* gal = app.add_subcommand("gallery", "list builtin systems");

    auto* predict = app.add_subcommand("predict", "predicted laws from component data only");
    add_system_flags(predict, predict_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_flags, b);
        if (*sw) return cmd_sweep(sweep_flags, window_fraction);
        if (*table) return cmd_table(row_ids, table_out);
        if (*gal) return cmd_gallery();
        if (*predict) return cmd_predict(predict_flags);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error (" << error_kind(e) << "): " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error (" << error_kind(e) << "): " << e.what() << '\n';
        return 1;
    }
    return 1;
}
