#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsim/analysis.h"
#include "dcsim/cache.h"
#include "dcsim/config.h"
#include "dcsim/trace_io.h"

namespace dcsim {

struct analyzer_selection {
    bool coresidency = false;
    bool eviction_locality = false;

    /// Comma-separated subset of {coresidency, evloc}; empty selects none.
    static analyzer_selection parse(std::string_view list);
};

/// One configured cache with its analyzers attached.
class simulation {
public:
    explicit simulation(const run_config& config);

    void access(const access_record& r) { cache_->access(r); }
    /// Drains the source. Throws std::runtime_error on an empty trace.
    void run(trace_source& trace);

    dram_cache& cache() { return *cache_; }
    const dram_cache& cache() const { return *cache_; }
    const coresidency_analyzer* coresidency() const { return coresidency_.get(); }
    const eviction_locality_analyzer* eviction_locality() const { return evloc_.get(); }

    /// Report for the run so far. `trace_name` is recorded verbatim.
    nlohmann::ordered_json report(const std::string& label, const std::string& trace_name) const;

private:
    run_config config_;
    std::unique_ptr<dram_cache> cache_;
    std::unique_ptr<coresidency_analyzer> coresidency_;
    std::unique_ptr<eviction_locality_analyzer> evloc_;
};

/// Trace named by the config: run.trace (a file) or run.gen (a generator
/// spec). Exactly one must be set.
struct trace_input {
    std::string name;
    std::vector<access_record> records;
};
trace_input load_trace(const run_config& config, trace_reader::warning_handler on_warning = {});

/// Simulates `records` under `config` and returns the report.
nlohmann::ordered_json run_records(const run_config& config, std::span<const access_record> records,
                                   const std::string& label, const std::string& trace_name);

/// Adds `normalized` (ratios against the baseline's install count) to a
/// report.
void add_normalized(nlohmann::ordered_json& report, const nlohmann::ordered_json& baseline);

} // namespace dcsim
