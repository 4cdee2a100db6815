#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsim/cache.h"
#include "dcsim/geometry.h"
#include "dcsim/policy.h"

namespace dcsim {

/// Flat `section.key -> value` configuration. Every key has a default; a
/// config file or flags overlay them. Unknown keys are rejected.
///
/// Precedence, lowest first: built-in defaults, the config file, flags.
class run_config {
public:
    run_config();

    /// Overlays an INI file (`[section]` headers, `key = value` lines).
    void load_file(const std::string& path);
    void load_stream(std::istream& in);

    /// `section.key=value`.
    void set_assignment(std::string_view assignment);
    void set(const std::string& key, const std::string& value);

    const std::string& get(const std::string& key) const;
    uint64_t get_u64(const std::string& key) const;
    /// Accepts size suffixes (4KB, 2GB).
    uint64_t get_size(const std::string& key) const;
    double get_double(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    static bool known_key(const std::string& key);
    static std::vector<std::string> known_keys();

    cache_geometry geometry() const;
    policy_params params() const;
    engine_options engine() const;
    std::string policy_name() const { return get("policy.name"); }
    uint64_t seed() const { return get_u64("run.seed"); }

    /// INI text, sections and keys in a fixed order.
    std::string dump() const;
    /// {"section": {"key": "value"}} in the same order.
    nlohmann::ordered_json to_json() const;

    friend bool operator==(const run_config&, const run_config&) = default;

private:
    std::map<std::string, std::string> values_;
};

/// Names accepted by make_policy.
const std::vector<std::string>& policy_names();

/// Builds the configured policy, wrapped in DWP when policy.dwp is set.
/// Throws config_error for unknown names or geometry the policy can't use.
std::unique_ptr<replacement_policy> make_policy(const run_config& config);

std::unique_ptr<dram_cache> make_cache(const run_config& config);

} // namespace dcsim
