#include "dcsim/etr.h"

#include <utility>

namespace dcsim {

etr_policy::etr_policy(std::unique_ptr<replacement_policy> inner, std::size_t rbt_entries, std::string name)
    : inner_(std::move(inner)), rbt_(rbt_entries), name_(std::move(name))
{
}

bool etr_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx)
{
    return inner_->on_hit(set, way, ctx);
}

policy_decision etr_policy::on_miss(std::span<const tag_entry> set, const access_context& ctx)
{
    if (first_invalid(set)) {
        ++invalid_fills_;
        return inner_->forced_install(set, ctx);
    }
    const uint64_t region = ctx.parts.region_id;
    if (const region_decision* last = rbt_.lookup(region)) {
        ++followers_;
        if (*last == region_decision::install)
            return inner_->forced_install(set, ctx);
        return policy_decision::bypass();
    }
    ++representatives_;
    const policy_decision d = inner_->on_miss(set, ctx);
    rbt_.insert(region, d.is_install() ? region_decision::install : region_decision::bypass);
    return d;
}

policy_decision etr_policy::forced_install(std::span<const tag_entry> set, const access_context& ctx)
{
    rbt_.insert(ctx.parts.region_id, region_decision::install);
    return inner_->forced_install(set, ctx);
}

void etr_policy::on_evict(const tag_entry& victim, const access_context& ctx)
{
    inner_->on_evict(victim, ctx);
}

void etr_policy::on_install(unsigned way, const access_context& ctx)
{
    inner_->on_install(way, ctx);
}

void etr_policy::describe(nlohmann::ordered_json& out) const
{
    const uint64_t lookups = rbt_.hits() + rbt_.misses();
    out["rbt_entries"] = rbt_.capacity();
    out["rbt_storage_bytes"] = rbt_.storage_bytes();
    out["rbt_hits"] = rbt_.hits();
    out["rbt_misses"] = rbt_.misses();
    out["rbt_hit_rate"] = lookups ? static_cast<double>(rbt_.hits()) / static_cast<double>(lookups) : 0.0;
    out["representative_decisions"] = representatives_;
    out["follower_decisions"] = followers_;
    out["invalid_fills"] = invalid_fills_;
    nlohmann::ordered_json inner;
    inner_->describe(inner);
    if (!inner.empty())
        out["inner"] = std::move(inner);
}

} // namespace dcsim
