#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsim/cache.h"

namespace dcsim {

/// Shadow count of resident lines per region, with residency episodes.
///
/// An episode starts at an install into a region with nothing resident, or
/// at the first install after an eviction was seen. Only the first eviction
/// of each episode is reported to subclasses.
class region_episode_tracker : public cache_observer {
public:
    struct region_residency {
        uint32_t resident_count = 0;
        bool eviction_seen_this_episode = false;
    };

    void on_install(const dram_cache& cache, uint64_t set_index, unsigned way, uint64_t region_id) override;
    void on_evict(const dram_cache& cache, uint64_t set_index, unsigned way, const tag_entry& victim,
                  uint64_t region_id) override;

    uint32_t resident_count(uint64_t region_id) const;

    /// Recounts residency from the tag store; true if every shadow count
    /// matches.
    bool matches_tag_store(const dram_cache& cache) const;

    uint64_t episodes() const { return episodes_; }

protected:
    /// `coresident` excludes the line being evicted.
    virtual void on_first_eviction(const dram_cache& cache, uint64_t set_index, unsigned way,
                                   uint64_t region_id, uint32_t coresident) = 0;

private:
    std::unordered_map<uint64_t, region_residency> regions_;
    uint64_t episodes_ = 0;
};

/// Coresident lines of a region at the first eviction from it.
class coresidency_analyzer : public region_episode_tracker {
public:
    explicit coresidency_analyzer(const cache_geometry& geometry);

    uint64_t samples() const { return samples_; }
    double mean() const { return samples_ ? static_cast<double>(sum_) / static_cast<double>(samples_) : 0.0; }
    /// histogram()[k] = number of first evictions that saw k coresident lines.
    const std::vector<uint64_t>& histogram() const { return histogram_; }

    void describe(nlohmann::ordered_json& out) const;

protected:
    void on_first_eviction(const dram_cache& cache, uint64_t set_index, unsigned way, uint64_t region_id,
                           uint32_t coresident) override;

private:
    std::vector<uint64_t> histogram_;
    uint64_t samples_ = 0;
    uint64_t sum_ = 0;
};

/// RRPV distribution of a region's other coresident lines at the first
/// eviction from it.
class eviction_locality_analyzer : public region_episode_tracker {
public:
    uint64_t samples() const { return samples_; }
    uint64_t lines() const;
    const std::array<uint64_t, 4>& rrpv_counts() const { return counts_; }
    double fraction(unsigned rrpv) const;
    double fraction_at_least(unsigned rrpv) const;

    void describe(nlohmann::ordered_json& out) const;

protected:
    void on_first_eviction(const dram_cache& cache, uint64_t set_index, unsigned way, uint64_t region_id,
                           uint32_t coresident) override;

private:
    std::array<uint64_t, 4> counts_{};
    uint64_t samples_ = 0;
};

/// Calls fn(set_index, way, entry) for every resident line of a region.
template <typename Fn>
void for_each_region_line(const dram_cache& cache, uint64_t region_id, Fn&& fn)
{
    const cache_geometry& g = cache.geometry();
    const uint64_t first_line = region_id * g.lines_per_region();
    for (uint64_t i = 0; i < g.lines_per_region(); ++i) {
        const uint64_t line = first_line + i;
        const uint64_t s = line % g.num_sets();
        const uint64_t tag = line / g.num_sets();
        const auto set = cache.tags().set(s);
        for (unsigned w = 0; w < set.size(); ++w)
            if (set[w].valid && set[w].tag == tag)
                fn(s, w, set[w]);
    }
}

} // namespace dcsim
