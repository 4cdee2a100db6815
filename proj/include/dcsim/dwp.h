#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dcsim/policy.h"

namespace dcsim {

/// Per-thread saturating counters learning whether write-allocated lines
/// get reused.
class dwp_state {
public:
    dwp_state(unsigned threads = 8, unsigned counter_bits = 3, unsigned initial = 0);

    unsigned threads() const { return static_cast<unsigned>(counters_.size()); }
    unsigned counter_max() const { return max_; }
    unsigned counter(unsigned thread_id) const { return counters_[thread_id % counters_.size()]; }
    void set_counter(unsigned thread_id, unsigned value);

    /// Non-zero counter: the thread reuses its writes, so allocate on write.
    bool allocate_writes(unsigned thread_id) const { return counter(thread_id) != 0; }

    /// Observation on eviction. Only write-allocated lines train.
    void on_evict(const tag_entry& victim);

    std::size_t storage_bits() const { return counters_.size() * bits_; }
    const std::vector<uint8_t>& counters() const { return counters_; }

private:
    unsigned bits_;
    unsigned max_;
    std::vector<uint8_t> counters_;
};

/// Install-time bookkeeping: WA bit marks write-allocated lines, the reuse
/// bit starts clear, and the owning thread is recorded.
void dwp_on_install(tag_entry& line, bool was_write_miss, unsigned thread_id);

/// Dynamic write-allocate wrapper. Write misses from threads with a
/// non-zero counter are installed unconditionally (through the inner
/// policy's forced install, which also updates any RBT); everything else is
/// left to the inner policy.
class dwp_policy : public replacement_policy {
public:
    dwp_policy(std::unique_ptr<replacement_policy> inner, const policy_params& params);

    std::string_view name() const override { return name_; }
    bool tracks_rrpv() const override { return inner_->tracks_rrpv(); }
    std::optional<unsigned> predict_way(const access_context& ctx) const override
    {
        return inner_->predict_way(ctx);
    }
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void on_evict(const tag_entry& victim, const access_context& ctx) override;
    void on_install(unsigned way, const access_context& ctx) override;
    void describe(nlohmann::ordered_json& out) const override;

    dwp_state& state() { return state_; }
    const dwp_state& state() const { return state_; }
    replacement_policy& inner() { return *inner_; }
    uint64_t overrides() const { return overrides_; }

private:
    std::unique_ptr<replacement_policy> inner_;
    dwp_state state_;
    std::string name_;
    uint64_t overrides_ = 0;
};

} // namespace dcsim
