#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dcsim/geometry.h"
#include "dcsim/ledger.h"
#include "dcsim/policy.h"
#include "dcsim/record.h"
#include "dcsim/tag_entry.h"

namespace dcsim {

/// Tag store for the whole cache. Storage is allocated in chunks of sets on
/// first write so multi-gigabyte geometries cost memory only for the sets a
/// trace touches.
class tag_store {
public:
    explicit tag_store(const cache_geometry& geometry);

    unsigned ways() const { return ways_; }
    uint64_t num_sets() const { return num_sets_; }

    std::span<tag_entry> set(uint64_t set_index);
    std::span<const tag_entry> set(uint64_t set_index) const;

    uint64_t valid_lines() const;

    /// Calls fn(set_index, way, entry) for every valid line.
    template <typename Fn>
    void for_each_valid(Fn&& fn) const
    {
        for (uint64_t c = 0; c < chunks_.size(); ++c) {
            if (!chunks_[c])
                continue;
            const uint64_t first = c * chunk_sets;
            const uint64_t last = std::min(num_sets_, first + chunk_sets);
            for (uint64_t s = first; s < last; ++s)
                for (unsigned w = 0; w < ways_; ++w) {
                    const tag_entry& e = chunks_[c][(s - first) * ways_ + w];
                    if (e.valid)
                        fn(s, w, e);
                }
        }
    }

private:
    static constexpr uint64_t chunk_sets = 4096;

    unsigned ways_;
    uint64_t num_sets_;
    std::vector<std::unique_ptr<tag_entry[]>> chunks_;
    std::vector<tag_entry> empty_set_;
};

enum class demote_billing : uint8_t {
    per_set, // one Demote per demotion round, metadata for all ways shares a burst
    per_way, // one Demote per way aged
};

struct engine_options {
    demote_billing demote_cost = demote_billing::per_set;
    uint8_t rrpv_max = rrpv_distant; // demotions saturate here
};

struct access_outcome {
    bool hit = false;
    bool installed = false;
    bool bypassed = false;
    bool evicted = false;
    bool evicted_dirty = false;
    /// Install into an invalid way; no replacement decision was involved.
    bool invalid_fill = false;
    int way_used = -1;
    std::optional<unsigned> predicted_way;
    event_list events;
};

class dram_cache;

/// Observer notified of residency changes (analyzers hook in here).
class cache_observer {
public:
    virtual ~cache_observer() = default;
    virtual void on_install(const dram_cache& cache, uint64_t set_index, unsigned way,
                            uint64_t region_id) = 0;
    /// Called before the victim is overwritten; the tag store still holds it.
    virtual void on_evict(const dram_cache& cache, uint64_t set_index, unsigned way,
                          const tag_entry& victim, uint64_t region_id) = 0;
};

struct thread_counters {
    uint64_t accesses = 0;
    uint64_t misses = 0;
    uint64_t first_instret = 0;
    uint64_t last_instret = 0;

    uint64_t instructions() const { return last_instret - first_instret; }
};

struct run_counters {
    uint64_t accesses = 0;
    uint64_t reads = 0;
    uint64_t writes = 0;
    uint64_t hits = 0;
    uint64_t misses = 0;
    uint64_t installs = 0;
    uint64_t bypasses = 0;
    uint64_t invalid_fills = 0;
    uint64_t evictions = 0;
    uint64_t dirty_evictions = 0;
    uint64_t predicted_hits = 0;       // hits under a way-predicting policy
    uint64_t correctly_predicted = 0;  // ... found in the predicted way
    std::map<uint32_t, thread_counters> threads;
};

/// The DRAM cache plus its access engine. Routes each request through the
/// policy, applies the decision to the tag store, and bills every
/// transaction to the ledger.
class dram_cache {
public:
    dram_cache(const cache_geometry& geometry, std::unique_ptr<replacement_policy> policy,
               engine_options options = {});

    access_outcome access(const access_record& record);

    /// Non-owning; the observer must outlive the cache or be detached.
    void attach(cache_observer& observer) { observers_.push_back(&observer); }

    const cache_geometry& geometry() const { return geometry_; }
    const tag_store& tags() const { return tags_; }
    tag_store& tags() { return tags_; }
    const bandwidth_ledger& ledger() const { return ledger_; }
    const run_counters& counters() const { return counters_; }
    replacement_policy& policy() { return *policy_; }
    const replacement_policy& policy() const { return *policy_; }
    const engine_options& options() const { return options_; }

    /// Region of the line stored at (set, tag).
    uint64_t region_of(uint64_t set_index, uint64_t tag) const
    {
        return line_address(set_index, tag, geometry_) / geometry_.region_bytes;
    }

private:
    void apply_demotions(std::span<tag_entry> set, const policy_decision& d, event_list& events);

    cache_geometry geometry_;
    std::unique_ptr<replacement_policy> policy_;
    engine_options options_;
    tag_store tags_;
    bandwidth_ledger ledger_;
    run_counters counters_;
    std::vector<cache_observer*> observers_;
};

} // namespace dcsim
