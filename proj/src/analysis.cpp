#include "dcsim/analysis.h"

#include <algorithm>

namespace dcsim {

// region_episode_tracker

void region_episode_tracker::on_install(const dram_cache&, uint64_t, unsigned, uint64_t region_id)
{
    region_residency& r = regions_[region_id];
    if (r.resident_count == 0 || r.eviction_seen_this_episode) {
        r.eviction_seen_this_episode = false;
        ++episodes_;
    }
    ++r.resident_count;
}

void region_episode_tracker::on_evict(const dram_cache& cache, uint64_t set_index, unsigned way,
                                      const tag_entry&, uint64_t region_id)
{
    auto it = regions_.find(region_id);
    if (it == regions_.end())
        return; // resident before the analyzer was attached
    region_residency& r = it->second;
    if (!r.eviction_seen_this_episode) {
        r.eviction_seen_this_episode = true;
        on_first_eviction(cache, set_index, way, region_id, r.resident_count - 1);
    }
    if (--r.resident_count == 0)
        regions_.erase(it);
}

uint32_t region_episode_tracker::resident_count(uint64_t region_id) const
{
    auto it = regions_.find(region_id);
    return it == regions_.end() ? 0 : it->second.resident_count;
}

bool region_episode_tracker::matches_tag_store(const dram_cache& cache) const
{
    std::unordered_map<uint64_t, uint32_t> recount;
    cache.tags().for_each_valid([&](uint64_t s, unsigned, const tag_entry& e) {
        ++recount[cache.region_of(s, e.tag)];
    });
    if (recount.size() != regions_.size())
        return false;
    for (const auto& [region, count] : recount) {
        auto it = regions_.find(region);
        if (it == regions_.end() || it->second.resident_count != count)
            return false;
    }
    return true;
}

// coresidency_analyzer

coresidency_analyzer::coresidency_analyzer(const cache_geometry& geometry)
    : histogram_(geometry.lines_per_region(), 0)
{
}

void coresidency_analyzer::on_first_eviction(const dram_cache&, uint64_t, unsigned, uint64_t,
                                             uint32_t coresident)
{
    ++samples_;
    sum_ += coresident;
    if (coresident < histogram_.size())
        ++histogram_[coresident];
}

void coresidency_analyzer::describe(nlohmann::ordered_json& out) const
{
    out["samples"] = samples_;
    out["mean"] = mean();
    out["histogram"] = histogram_;
}

// eviction_locality_analyzer

void eviction_locality_analyzer::on_first_eviction(const dram_cache& cache, uint64_t set_index,
                                                   unsigned way, uint64_t region_id, uint32_t)
{
    ++samples_;
    for_each_region_line(cache, region_id, [&](uint64_t s, unsigned w, const tag_entry& e) {
        if (s == set_index && w == way)
            return;
        ++counts_[std::min<unsigned>(e.rrpv, 3)];
    });
}

uint64_t eviction_locality_analyzer::lines() const
{
    return counts_[0] + counts_[1] + counts_[2] + counts_[3];
}

double eviction_locality_analyzer::fraction(unsigned rrpv) const
{
    const uint64_t n = lines();
    return n ? static_cast<double>(counts_[rrpv]) / static_cast<double>(n) : 0.0;
}

double eviction_locality_analyzer::fraction_at_least(unsigned rrpv) const
{
    const uint64_t n = lines();
    uint64_t k = 0;
    for (unsigned v = rrpv; v < 4; ++v)
        k += counts_[v];
    return n ? static_cast<double>(k) / static_cast<double>(n) : 0.0;
}

void eviction_locality_analyzer::describe(nlohmann::ordered_json& out) const
{
    out["samples"] = samples_;
    out["coresident_lines"] = lines();
    out["rrpv_fraction"] = {fraction(0), fraction(1), fraction(2), fraction(3)};
    out["rrpv_ge2_fraction"] = fraction_at_least(2);
}

} // namespace dcsim
