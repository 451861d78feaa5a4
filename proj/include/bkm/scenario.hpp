#pragma once

#include "bkm/flow.hpp"
#include "bkm/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bkm {

struct AxisSpec {
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    std::vector<double> nodes() const;
};

/// Thresholds a run is gated on; absent checks are not evaluated.
struct Checks {
    std::optional<double> conservation;          // max |a_k| over the grid
    std::optional<double> golden_kb;             // max |u - closed form| (kb-exact)
    std::optional<double> asymptotic_flatness;   // |u(t, +-x_max) - u(0, x_max)|
    std::optional<double> loop_closure;          // |u(t, x_max) - u(t, x_min)|
};

/// One reproducible run: system, reduction, start point, grids, flow settings.
struct Scenario {
    int schema_version = 1;
    std::string name;
    BkmSpec bkm;
    ReductionSpec reduction;
    PhasePoint start;
    AxisSpec t_axis;
    AxisSpec x_axis;
    FlowConfig flow;
    std::vector<std::string> outputs{"csv", "summary"};
    Checks checks;

    /// Structural validation; throws ConfigError naming the offending field.
    void validate() const;
};

Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& s);
Scenario load_scenario_file(const std::string& path);

std::vector<std::string> preset_names();
Scenario preset(const std::string& name);

} // namespace bkm
