#include "dcsim/baseline_policies.h"

#include <algorithm>

namespace dcsim {

// always_install_policy

always_install_policy::always_install_policy(const cache_geometry& geometry, std::string_view name)
    : name_(name), ways_(geometry.ways)
{
    if (ways_ == 2)
        mru_.assign(geometry.num_sets(), 0);
}

unsigned always_install_policy::lru_way(uint64_t set_index) const
{
    return ways_ == 2 ? 1u - mru_[set_index] : 0u;
}

bool always_install_policy::on_hit(std::span<tag_entry>, unsigned way, const access_context& ctx)
{
    if (ways_ == 2)
        mru_[ctx.parts.set_index] = static_cast<uint8_t>(way);
    return false;
}

policy_decision always_install_policy::on_miss(std::span<const tag_entry> set, const access_context& ctx)
{
    if (auto w = first_invalid(set))
        return policy_decision::install_at(*w);
    return policy_decision::install_at(lru_way(ctx.parts.set_index));
}

policy_decision always_install_policy::forced_install(std::span<const tag_entry> set,
                                                      const access_context& ctx)
{
    return on_miss(set, ctx);
}

void always_install_policy::on_install(unsigned way, const access_context& ctx)
{
    if (ways_ == 2)
        mru_[ctx.parts.set_index] = static_cast<uint8_t>(way);
}

// random_victim_policy

random_victim_policy::random_victim_policy(const cache_geometry& geometry, uint64_t seed) : rng_(seed)
{
    if (geometry.ways != 2)
        throw config_error("random2 requires a 2-way geometry");
}

policy_decision random_victim_policy::on_miss(std::span<const tag_entry> set, const access_context&)
{
    if (auto w = first_invalid(set))
        return policy_decision::install_at(*w);
    return policy_decision::install_at(static_cast<unsigned>(rng_.below(set.size())));
}

policy_decision random_victim_policy::forced_install(std::span<const tag_entry> set,
                                                     const access_context& ctx)
{
    return on_miss(set, ctx);
}

// bypass90

policy_decision bypass_probabilistic_decide(double draw, double install_prob, unsigned install_way)
{
    if (draw < install_prob)
        return policy_decision::install_at(install_way);
    return policy_decision::bypass();
}

bypass90_policy::bypass90_policy(const cache_geometry& geometry, double install_prob, uint64_t seed)
    : victim_(geometry), install_prob_(install_prob), rng_(seed)
{
    if (install_prob < 0.0 || install_prob > 1.0)
        throw config_error("bypass install probability must be in [0, 1]");
}

bool bypass90_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx)
{
    return victim_.on_hit(set, way, ctx);
}

policy_decision bypass90_policy::on_miss(std::span<const tag_entry> set, const access_context& ctx)
{
    if (auto w = first_invalid(set))
        return policy_decision::install_at(*w);
    auto d = bypass_probabilistic_decide(rng_.uniform(), install_prob_,
                                         victim_.lru_way(ctx.parts.set_index));
    ++(d.is_install() ? installs_ : bypasses_);
    return d;
}

policy_decision bypass90_policy::forced_install(std::span<const tag_entry> set, const access_context& ctx)
{
    return victim_.forced_install(set, ctx);
}

void bypass90_policy::on_install(unsigned way, const access_context& ctx)
{
    victim_.on_install(way, ctx);
}

void bypass90_policy::describe(nlohmann::ordered_json& out) const
{
    out["install_prob"] = install_prob_;
    out["probabilistic_installs"] = installs_;
    out["probabilistic_bypasses"] = bypasses_;
}

// duel_state

duel_state::duel_state(uint64_t num_sets, unsigned leaders_per_policy, unsigned psel_bits)
{
    if (psel_bits == 0 || psel_bits > 16)
        throw config_error("PSEL width must be 1..16 bits");
    // Keep at least half of the sets as followers on tiny caches.
    leaders_ = static_cast<unsigned>(std::min<uint64_t>(leaders_per_policy, num_sets / 4));
    stride_ = leaders_ ? std::max<uint64_t>(1, num_sets / (2 * uint64_t{leaders_})) : 1;
    psel_max_ = (1u << psel_bits) - 1;
    psel_ = midpoint() - 1;
}

duel_state::role duel_state::role_of(uint64_t set_index) const
{
    if (leaders_ == 0 || set_index % stride_ != 0)
        return role::follower;
    const uint64_t k = set_index / stride_;
    if (k >= 2 * uint64_t{leaders_})
        return role::follower;
    return (k % 2 == 0) ? role::install_leader : role::bypass_leader;
}

void duel_state::record_miss(uint64_t set_index)
{
    switch (role_of(set_index)) {
    case role::install_leader:
        if (psel_ < psel_max_)
            ++psel_;
        break;
    case role::bypass_leader:
        if (psel_ > 0)
            --psel_;
        break;
    case role::follower: break;
    }
}

// bab_policy

bab_policy::bab_policy(const cache_geometry& geometry, const policy_params& params, uint64_t seed)
    : victim_(geometry),
      duel_(geometry.num_sets(), params.bab_leader_sets, params.bab_psel_bits),
      install_prob_(params.bypass_install_prob),
      rng_(seed)
{
}

bool bab_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx)
{
    return victim_.on_hit(set, way, ctx);
}

policy_decision bab_policy::on_miss(std::span<const tag_entry> set, const access_context& ctx)
{
    const uint64_t s = ctx.parts.set_index;
    const auto r = duel_.role_of(s);
    duel_.record_miss(s);
    if (auto w = first_invalid(set))
        return policy_decision::install_at(*w);
    const bool use_bypass = r == duel_state::role::bypass_leader
        || (r == duel_state::role::follower && duel_.followers_bypass());
    if (!use_bypass)
        return policy_decision::install_at(victim_.lru_way(s));
    return bypass_probabilistic_decide(rng_.uniform(), install_prob_, victim_.lru_way(s));
}

policy_decision bab_policy::forced_install(std::span<const tag_entry> set, const access_context& ctx)
{
    return victim_.forced_install(set, ctx);
}

void bab_policy::on_install(unsigned way, const access_context& ctx)
{
    victim_.on_install(way, ctx);
}

void bab_policy::describe(nlohmann::ordered_json& out) const
{
    out["psel"] = duel_.psel();
    out["psel_max"] = duel_.psel_max();
    out["leaders_per_policy"] = duel_.leaders_per_policy();
    out["followers_bypass"] = duel_.followers_bypass();
}

} // namespace dcsim
