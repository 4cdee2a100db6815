#pragma once

#include <cstdint>

#include "dcsim/etr.h"
#include "dcsim/policy.h"
#include "dcsim/prng.h"
#include "dcsim/region_table.h"
#include "dcsim/rrip.h"

namespace dcsim {

/// Region Install Table: region id -> way the region was last steered to.
using region_install_table = region_table<uint8_t>;

struct way_prediction {
    enum class source_kind : uint8_t { region_last_way, preferred_way };

    unsigned predicted_way = 0;
    source_kind source = source_kind::preferred_way;
};

/// Address-derived preferred way: bit 6 of the region id folded with the
/// parity of the tag. Every line of a region shares it when the region fits
/// in one tag page.
unsigned preferred_way(const address_parts& parts);

/// Probabilistic Way-Steering: preferred way when draw < bias, else the
/// other way.
inline unsigned pws_select_way(const address_parts& parts, double draw, double bias)
{
    const unsigned pref = preferred_way(parts);
    return draw < bias ? pref : 1u - pref;
}

/// PWS + Ganged Way-Steering state shared by the ACCORD policies.
class way_steering {
public:
    way_steering(std::size_t rit_entries, double bias, uint64_t seed);

    /// Fresh PWS draw.
    unsigned pws(const address_parts& parts);

    /// RIT hit: the region's last way. RIT miss: a PWS draw, remembered in
    /// the RIT for later installs of the region.
    unsigned gws(const address_parts& parts);

    /// Lookup-time prediction; does not disturb RIT recency.
    way_prediction predict(const address_parts& parts) const;

    const region_install_table& rit() const { return rit_; }
    uint64_t pws_draws() const { return pws_draws_; }
    uint64_t pws_preferred() const { return pws_preferred_; }

    void describe(nlohmann::ordered_json& out) const;

private:
    region_install_table rit_;
    double bias_;
    prng rng_;
    uint64_t pws_draws_ = 0;
    uint64_t pws_preferred_ = 0;
};

/// ACCORD alone: always install, into the GWS-steered way.
class accord_policy : public replacement_policy {
public:
    accord_policy(const cache_geometry& geometry, const policy_params& params, uint64_t seed);

    std::string_view name() const override { return "accord"; }
    std::optional<unsigned> predict_way(const access_context& ctx) const override;
    bool on_hit(std::span<tag_entry>, unsigned, const access_context&) override { return false; }
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void describe(nlohmann::ordered_json& out) const override;

    way_steering& steering() { return steer_; }

private:
    way_steering steer_;
};

/// ACCORD + RRIP-AOB without a bypass table: the steered way is the only
/// install candidate and its own RRPV decides install or bypass.
class accord_aob_policy : public replacement_policy {
public:
    accord_aob_policy(const cache_geometry& geometry, const rrip_params& rrip, const policy_params& params,
                      uint64_t seed);

    std::string_view name() const override { return "accord-aob"; }
    bool tracks_rrpv() const override { return true; }
    std::optional<unsigned> predict_way(const access_context& ctx) const override;
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void describe(nlohmann::ordered_json& out) const override;

    way_steering& steering() { return steer_; }

private:
    rrip_params rrip_;
    way_steering steer_;
};

/// Tiered ACCORD + ETR on RRIP-AOB: the steered way is the only install
/// candidate, and AOB with representative/follower handling decides
/// between installing there and bypassing.
class accord_etr_policy : public replacement_policy {
public:
    accord_etr_policy(const cache_geometry& geometry, const rrip_params& rrip, const policy_params& params,
                      uint64_t seed);

    std::string_view name() const override { return "accord-etr"; }
    bool tracks_rrpv() const override { return true; }
    std::optional<unsigned> predict_way(const access_context& ctx) const override;
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void describe(nlohmann::ordered_json& out) const override;

    way_steering& steering() { return steer_; }
    const recent_bypass_table& rbt() const { return rbt_; }

private:
    rrip_params rrip_;
    way_steering steer_;
    recent_bypass_table rbt_;
    uint64_t representatives_ = 0;
    uint64_t followers_ = 0;
};

} // namespace dcsim
