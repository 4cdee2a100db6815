#pragma once

#include <memory>
#include <string>

#include "dcsim/policy.h"
#include "dcsim/region_table.h"

namespace dcsim {

enum class region_decision : uint8_t { install, bypass };

/// Recent-Bypass Table: region id -> last representative decision.
class recent_bypass_table : public region_table<region_decision> {
public:
    static constexpr std::size_t default_entries = 128;
    static constexpr std::size_t entry_bytes = 4;

    explicit recent_bypass_table(std::size_t entries = default_entries) : region_table(entries) {}

    std::size_t storage_bytes() const { return capacity() * entry_bytes; }
};

/// Efficient Tracking of Reuse over an Age-On-Bypass policy.
///
/// The first conflicting miss to a region (an RBT miss) is the region's
/// representative: the inner policy decides from the resident RRPV and pays
/// for any demotion. Later misses to the region while its RBT entry is
/// resident repeat that decision without reading or updating RRPV state.
/// Misses onto invalid ways install directly and leave the RBT alone.
class etr_policy : public replacement_policy {
public:
    etr_policy(std::unique_ptr<replacement_policy> inner, std::size_t rbt_entries, std::string name = "etr");

    std::string_view name() const override { return name_; }
    bool tracks_rrpv() const override { return inner_->tracks_rrpv(); }
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void on_evict(const tag_entry& victim, const access_context& ctx) override;
    void on_install(unsigned way, const access_context& ctx) override;
    void describe(nlohmann::ordered_json& out) const override;

    const recent_bypass_table& rbt() const { return rbt_; }
    replacement_policy& inner() { return *inner_; }

    uint64_t representative_decisions() const { return representatives_; }
    uint64_t follower_decisions() const { return followers_; }

private:
    std::unique_ptr<replacement_policy> inner_;
    recent_bypass_table rbt_;
    std::string name_;
    uint64_t representatives_ = 0;
    uint64_t followers_ = 0;
    uint64_t invalid_fills_ = 0;
};

} // namespace dcsim
