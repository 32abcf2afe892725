#pragma once

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "pseudohopf/asymptotics.hpp"
#include "pseudohopf/bifurcation.hpp"
#include "pseudohopf/sweepfit.hpp"

namespace pseudohopf {

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::optional<std::string> gallery;
    Params params;
    std::optional<Json> descriptor;  // inline system, exclusive with `gallery`
    IntegrationLimits limits;
    Grid grid;
    CompareTolerances tolerances;
    double fit_window_fraction = 0.5;
    std::string out_dir = ".";

    void validate() const;
};

// Throws ConfigError on unknown keys or malformed values.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);

// Builds and finalizes the configured system.
PiecewiseSystem build_system(const RunConfig& config);
PiecewiseSystem system_from_descriptor(const Json& j, const IntegrationLimits& limits);

Json to_json(const AsymptoticLaw& law);
Json to_json(const SignTriple& s);
Json to_json(const CycleRecord& r);
Json to_json(const SlidingSegment& s);
Json to_json(const FitResult& f);
Json to_json(const Verdict& v);
Json to_json(const ModelFlight& f);
Json to_json(const SideAsymptotics& s);
Json to_json(const SystemPrediction& p);
Json to_json(const Grid& g);

// Formats with 17 significant digits, '.' decimal point and no locale dependence.
std::string format_double(double v);

// Header b,x_star,period,stability,delta_residual and one row per cycle.
std::string sweep_csv(const SweepResult& result);

// Columns: ln|b|, ln value, -ln|b|, value.
std::string plot_data(std::span<const Sample> samples);

// Writes `text` to `path`, creating parent directories. Throws ConfigError when not writable.
void write_text(const std::string& path, const std::string& text);

}  // namespace pseudohopf
