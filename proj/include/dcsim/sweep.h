#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsim/config.h"
#include "dcsim/record.h"

namespace dcsim {

struct grid_axis {
    std::string key;
    std::vector<std::string> values;
};

/// `section.key=v1,v2,...`
grid_axis parse_grid_axis(std::string_view text);

using grid_point = std::vector<std::pair<std::string, std::string>>;

/// Cartesian product in axis order; the last axis varies fastest.
std::vector<grid_point> expand_grid(std::span<const grid_axis> axes);

struct sweep_options {
    unsigned jobs = 1;
    /// Non-empty: each point is also run under this policy (same config
    /// otherwise, DWP off) and gets a `normalized` block.
    std::string baseline_policy;
    std::string label_prefix;
};

/// One report per grid point, in grid order whatever `jobs` is.
std::vector<nlohmann::ordered_json> run_sweep(const run_config& base, std::span<const grid_axis> axes,
                                              std::span<const access_record> trace, const std::string& trace_name,
                                              const sweep_options& options);

} // namespace dcsim
