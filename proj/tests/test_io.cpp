#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "pseudohopf/error.hpp"
#include "pseudohopf/io.hpp"
#include "pseudohopf/table.hpp"

using namespace pseudohopf;

TEST_CASE("format_double uses 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(1e-20) == "9.9999999999999995e-21");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(std::stod(format_double(std::numbers::pi)) == std::numbers::pi);
}

TEST_CASE("parse_config reads every section") {
    const Json j = Json::parse(R"({
        "gallery": "efocus_fold",
        "params": {"eps": 0.2},
        "limits": {"rel_tol": 1e-9, "t_max": 50},
        "grid": {"b_max": 0.001, "ratio": 0.25, "count": 12},
        "tolerances": {"exponent": 0.03, "coefficient": 0.05},
        "fit_window_fraction": 0.4,
        "output": {"dir": "out"}
    })");
    const RunConfig c = parse_config(j);
    CHECK(*c.gallery == "efocus_fold");
    CHECK(c.params.at("eps") == 0.2);
    CHECK(c.limits.rel_tol == 1e-9);
    CHECK(c.limits.t_max == 50.0);
    CHECK(c.grid.count == 12);
    CHECK(c.tolerances.coefficient == 0.05);
    CHECK(c.fit_window_fraction == 0.4);
    CHECK(c.out_dir == "out");
    CHECK(build_system(c).name == "efocus_fold");
}

TEST_CASE("parse_config rejects malformed configs") {
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"gallery": "fold_fold_broken", "colour": 1})")), ConfigError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({})")), ConfigError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"gallery": "fold_fold_broken", "system": {}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"gallery": "x", "grid": {"count": "many"}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"gallery": "x", "fit_window_fraction": 0})")), ConfigError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"gallery": "x", "params": {"eps": "big"}})")), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("flow descriptor reproduces the builtin broken fold pair") {
    const Json d = Json::parse(R"({
        "name": "fold pair",
        "upper": {"backend": "flow", "P": [[-1]], "Q": [[0], [2]], "class": {"kind": "fold", "multiplicity": 2}},
        "lower": {"backend": "flow", "P": [[1]], "Q": [[0], [2], [3]], "class": {"kind": "fold"}},
        "window": [1e-6, 0.2]
    })");
    const PiecewiseSystem custom = system_from_descriptor(d, {});
    const PiecewiseSystem builtin = make_builtin("fold_fold_broken");
    for (double x : {1e-3, 1e-2, 1e-1})
        CHECK(displacement(custom, x, -1e-4) == doctest::Approx(displacement(builtin, x, -1e-4)).epsilon(1e-9));
    CHECK(custom.upper.declared->validation == Validation::Valid);
}

TEST_CASE("model descriptor") {
    const Json d = Json::parse(R"({
        "upper": {"backend": "model", "phi": {"form": "dulac", "alpha": -1, "r": 1.4},
                  "tau": {"form": "log", "T0": 1, "sign": 1}, "class": {"kind": "polycycle", "graphic_number": 1.4}},
        "lower": {"backend": "model", "phi": {"form": "dulac", "alpha": -1, "r": 1.25},
                  "tau": {"form": "log", "T0": 1, "sign": -1}},
        "window": [1e-30, 0.5]
    })");
    const PiecewiseSystem s = system_from_descriptor(d, {});
    const PiecewiseSystem builtin = make_builtin("model_polycycle_polycycle");
    CHECK(displacement(s, 0.01, 1e-4) == doctest::Approx(displacement(builtin, 0.01, 1e-4)));
}

TEST_CASE("descriptor errors") {
    const auto bad = [](const char* text) { return system_from_descriptor(Json::parse(text), {}); };
    CHECK_THROWS_AS(bad(R"({"upper": {"backend": "flow", "P": [[-1]]}, "lower": {}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"upper": {"backend": "spline"}, "lower": {}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"upper": {"backend": "flow", "P": [[-1], [1, 2]], "Q": [[0]]}, "lower": {}})"),
                    ConfigError);
    CHECK_THROWS_AS(bad(R"({"upper": {"backend": "model", "phi": {"form": "dulac", "alpha": 1},
                          "tau": {"form": "log", "T0": 1}}, "lower": {}})"),
                    ConfigError);
}

TEST_CASE("sweep CSV and plot data layout") {
    SweepResult r;
    CycleRecord c;
    c.b = -0.01;
    c.x_star = 0.1;
    c.period = 0.4;
    c.delta_residual = 1e-17;
    r.samples.push_back(c);
    const std::string csv = sweep_csv(r);
    CHECK(csv == "b,x_star,period,stability,delta_residual\n"
                 "-0.01,0.10000000000000001,0.40000000000000002,stable,1.0000000000000001e-17\n");
    const std::vector<Sample> s{{-0.01, 0.1}};
    const std::string dat = plot_data(s);
    CHECK(dat.rfind("# ln_abs_b ln_value neg_ln_abs_b value\n", 0) == 0);
    std::istringstream in(dat.substr(dat.find('\n') + 1));
    double lb = 0, lv = 0, nlb = 0, v = 0;
    in >> lb >> lv >> nlb >> v;
    CHECK(lb == doctest::Approx(std::log(0.01)));
    CHECK(lv == doctest::Approx(std::log(0.1)));
    CHECK(nlb == doctest::Approx(-std::log(0.01)));
    CHECK(v == 0.1);
}

TEST_CASE("write_text creates directories") {
    const auto dir = std::filesystem::temp_directory_path() / "pseudohopf_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    write_text((dir / "a.txt").string(), "hello\n");
    std::ifstream in(dir / "a.txt");
    std::string line;
    std::getline(in, line);
    CHECK(line == "hello");
    std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("JSON reports encode non-finite values as null") {
    AsymptoticLaw l;
    l.coefficient = std::nan("");
    const Json j = to_json(l);
    CHECK(j.at("coefficient").is_null());
    CHECK(j.at("law_family") == "power");
}

TEST_CASE("table row selection") {
    CHECK(select_rows({}).size() == table_rows().size());
    CHECK(select_rows({"fold_fold"}).size() == 1);
    CHECK_THROWS_AS(select_rows({"fold_fold", "nope"}), ConfigError);
    CHECK(table_rows().size() >= 6);
}
