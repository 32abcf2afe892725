#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pseudohopf/fields.hpp"
#include "pseudohopf/returns.hpp"

namespace pseudohopf {

struct Component {
    ReturnProvider provider;
    std::optional<ComponentClass> declared;  // annotated by classify_component for flows
    // When present, flow landing points are projected back onto its level set.
    std::optional<Poly2> first_integral;
};

// Upper field translated by b along y = 0 against a fixed lower field.
struct PiecewiseSystem {
    std::string name;
    Component upper;
    Component lower;
    Window window;

    const Component& side(Half h) const { return h == Half::Upper ? upper : lower; }
};

// Half-return of one side in that side's own frame.
ReturnData half_return(const PiecewiseSystem& system, Half side, double x);

// Samples 8 log-spaced abscissas of the window and checks phi < 0 and
// opposite flight-time signs. Throws NumericalError on failure.
void validate_h1(const PiecewiseSystem& system);

// Validates declared classes against flow jets and the window invariants.
void finalize_system(PiecewiseSystem& system);

using Params = std::map<std::string, double>;

struct GalleryEntry {
    std::string name;
    std::string description;
    Params defaults;
};

const std::vector<GalleryEntry>& gallery();

// Builds a named benchmark system. Unknown names throw ConfigError; parameter
// values violating component invariants throw InvalidArgument.
PiecewiseSystem make_builtin(const std::string& name, const Params& params = {},
                             const IntegrationLimits& limits = {});

}  // namespace pseudohopf
