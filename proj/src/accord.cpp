#include "dcsim/accord.h"

#include <bit>

namespace dcsim {

namespace {

void require_two_ways(const cache_geometry& geometry, std::string_view policy)
{
    if (geometry.ways != 2)
        throw config_error(std::string(policy) + " requires a 2-way geometry");
}

} // namespace

unsigned preferred_way(const address_parts& parts)
{
    return static_cast<unsigned>(((parts.region_id >> 6) ^ std::popcount(parts.tag)) & 1u);
}

// way_steering

way_steering::way_steering(std::size_t rit_entries, double bias, uint64_t seed)
    : rit_(rit_entries), bias_(bias), rng_(seed)
{
    if (bias < 0.0 || bias > 1.0)
        throw config_error("PWS bias must be in [0, 1]");
}

unsigned way_steering::pws(const address_parts& parts)
{
    const unsigned way = pws_select_way(parts, rng_.uniform(), bias_);
    ++pws_draws_;
    pws_preferred_ += way == preferred_way(parts);
    return way;
}

unsigned way_steering::gws(const address_parts& parts)
{
    if (const uint8_t* last = rit_.lookup(parts.region_id))
        return *last;
    const unsigned way = pws(parts);
    rit_.insert(parts.region_id, static_cast<uint8_t>(way));
    return way;
}

way_prediction way_steering::predict(const address_parts& parts) const
{
    if (auto last = rit_.peek(parts.region_id))
        return {*last, way_prediction::source_kind::region_last_way};
    return {preferred_way(parts), way_prediction::source_kind::preferred_way};
}

void way_steering::describe(nlohmann::ordered_json& out) const
{
    const uint64_t lookups = rit_.hits() + rit_.misses();
    out["rit_entries"] = rit_.capacity();
    out["rit_hit_rate"] = lookups ? static_cast<double>(rit_.hits()) / static_cast<double>(lookups) : 0.0;
    out["pws_bias"] = bias_;
    out["pws_draws"] = pws_draws_;
    out["pws_preferred_fraction"] =
        pws_draws_ ? static_cast<double>(pws_preferred_) / static_cast<double>(pws_draws_) : 0.0;
}

// accord_policy

accord_policy::accord_policy(const cache_geometry& geometry, const policy_params& params, uint64_t seed)
    : steer_(params.rit_entries, params.pws_bias, seed)
{
    require_two_ways(geometry, "accord");
}

std::optional<unsigned> accord_policy::predict_way(const access_context& ctx) const
{
    return steer_.predict(ctx.parts).predicted_way;
}

policy_decision accord_policy::on_miss(std::span<const tag_entry>, const access_context& ctx)
{
    return policy_decision::install_at(steer_.gws(ctx.parts));
}

policy_decision accord_policy::forced_install(std::span<const tag_entry> set, const access_context& ctx)
{
    return on_miss(set, ctx);
}

void accord_policy::describe(nlohmann::ordered_json& out) const
{
    steer_.describe(out);
}

// accord_aob_policy

accord_aob_policy::accord_aob_policy(const cache_geometry& geometry, const rrip_params& rrip,
                                     const policy_params& params, uint64_t seed)
    : rrip_(rrip), steer_(params.rit_entries, params.pws_bias, seed)
{
    require_two_ways(geometry, "accord-aob");
    rrip_.validate();
}

std::optional<unsigned> accord_aob_policy::predict_way(const access_context& ctx) const
{
    return steer_.predict(ctx.parts).predicted_way;
}

bool accord_aob_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context&)
{
    return rrip_promote(set[way]);
}

policy_decision accord_aob_policy::on_miss(std::span<const tag_entry> set, const access_context& ctx)
{
    const unsigned way = steer_.gws(ctx.parts);
    const tag_entry& resident = set[way];
    if (!resident.valid || resident.rrpv >= rrip_.rrpv_max)
        return policy_decision::install_at(way, rrip_.insert_rrpv);
    return policy_decision::bypass(static_cast<uint8_t>(1u << way));
}

policy_decision accord_aob_policy::forced_install(std::span<const tag_entry>, const access_context& ctx)
{
    return policy_decision::install_at(steer_.gws(ctx.parts), rrip_.insert_rrpv);
}

void accord_aob_policy::describe(nlohmann::ordered_json& out) const
{
    steer_.describe(out);
}

// accord_etr_policy

accord_etr_policy::accord_etr_policy(const cache_geometry& geometry, const rrip_params& rrip,
                                     const policy_params& params, uint64_t seed)
    : rrip_(rrip), steer_(params.rit_entries, params.pws_bias, seed), rbt_(params.rbt_entries)
{
    require_two_ways(geometry, "accord-etr");
    rrip_.validate();
}

std::optional<unsigned> accord_etr_policy::predict_way(const access_context& ctx) const
{
    return steer_.predict(ctx.parts).predicted_way;
}

bool accord_etr_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context&)
{
    return rrip_promote(set[way]);
}

policy_decision accord_etr_policy::on_miss(std::span<const tag_entry> set, const access_context& ctx)
{
    const uint64_t region = ctx.parts.region_id;
    const unsigned way = steer_.gws(ctx.parts);
    const tag_entry& resident = set[way];

    // Same as plain ETR: an empty slot is filled without touching the RBT.
    if (!resident.valid)
        return policy_decision::install_at(way, rrip_.insert_rrpv);
    if (const region_decision* last = rbt_.lookup(region)) {
        ++followers_;
        if (*last == region_decision::install)
            return policy_decision::install_at(way, rrip_.insert_rrpv);
        return policy_decision::bypass();
    }
    ++representatives_;
    if (resident.rrpv >= rrip_.rrpv_max) {
        rbt_.insert(region, region_decision::install);
        return policy_decision::install_at(way, rrip_.insert_rrpv);
    }
    rbt_.insert(region, region_decision::bypass);
    return policy_decision::bypass(static_cast<uint8_t>(1u << way));
}

policy_decision accord_etr_policy::forced_install(std::span<const tag_entry>, const access_context& ctx)
{
    const unsigned way = steer_.gws(ctx.parts);
    rbt_.insert(ctx.parts.region_id, region_decision::install);
    return policy_decision::install_at(way, rrip_.insert_rrpv);
}

void accord_etr_policy::describe(nlohmann::ordered_json& out) const
{
    steer_.describe(out);
    const uint64_t lookups = rbt_.hits() + rbt_.misses();
    out["rbt_entries"] = rbt_.capacity();
    out["rbt_hit_rate"] = lookups ? static_cast<double>(rbt_.hits()) / static_cast<double>(lookups) : 0.0;
    out["representative_decisions"] = representatives_;
    out["follower_decisions"] = followers_;
}

} // namespace dcsim
