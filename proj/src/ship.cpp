#include "dcsim/ship.h"

namespace dcsim {

shct_table::shct_table(std::size_t entries, unsigned counter_bits, unsigned initial)
    : bits_(counter_bits), max_((1u << counter_bits) - 1), initial_(initial)
{
    if (!is_pow2(entries) || entries > default_entries)
        throw config_error("SHCT entries must be a power of two no larger than 4096");
    if (counter_bits == 0 || counter_bits > 8)
        throw config_error("SHCT counter width must be 1..8 bits");
    if (initial > max_)
        throw config_error("SHCT initial value exceeds counter range");
    counters_.assign(entries + 1, static_cast<uint8_t>(initial));
}

void shct_table::set_counter(uint16_t signature, unsigned value)
{
    counters_[slot(signature)] = static_cast<uint8_t>(value > max_ ? max_ : value);
}

void shct_table::train(const tag_entry& victim)
{
    uint8_t& c = counters_[slot(victim.signature)];
    if (victim.r_bit) {
        if (c < max_)
            ++c;
    } else if (c > 0) {
        --c;
    }
}

std::vector<uint64_t> shct_table::histogram() const
{
    std::vector<uint64_t> h(max_ + 1, 0);
    for (std::size_t i = 0; i + 1 < counters_.size(); ++i)
        ++h[counters_[i]];
    return h;
}

policy_decision ship_aob_decide(std::span<const tag_entry> set, reuse_priority priority,
                                bool force_install, const rrip_params& params)
{
    const uint8_t rrpv = priority_rrpv(priority, params);
    if (auto w = first_invalid(set))
        return policy_decision::install_at(*w, rrpv);
    if (auto w = first_with_rrpv_at_least(set, params.rrpv_max))
        return policy_decision::install_at(*w, rrpv);
    if (force_install)
        return policy_decision::install_at(max_rrpv_way(set), rrpv);
    // Low-priority bypasses leave the resident's state untouched.
    return policy_decision::bypass(priority == reuse_priority::high ? all_ways_mask(set.size()) : 0);
}

ship_aob_policy::ship_aob_policy(const rrip_params& rrip, const policy_params& params, uint64_t seed)
    : rrip_(rrip),
      shct_(params.shct_entries, params.shct_bits, params.shct_init),
      force_prob_(params.force_install_pct / 100.0),
      rng_(seed)
{
    rrip_.validate();
    if (force_prob_ < 0.0 || force_prob_ > 1.0)
        throw config_error("force-install percentage must be in [0, 100]");
}

bool ship_aob_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context&)
{
    return rrip_promote(set[way]);
}

policy_decision ship_aob_policy::on_miss(std::span<const tag_entry> set, const access_context& ctx)
{
    const reuse_priority p = shct_.predict(ctx.signature);
    policy_decision d = ship_aob_decide(set, p, false, rrip_);
    if (d.is_bypass() && force_prob_ > 0.0 && rng_.chance(force_prob_)) {
        ++forced_installs_;
        return ship_aob_decide(set, p, true, rrip_);
    }
    if (d.is_bypass())
        ++(p == reuse_priority::low ? low_bypasses_ : high_bypasses_);
    return d;
}

policy_decision ship_aob_policy::forced_install(std::span<const tag_entry> set, const access_context& ctx)
{
    return policy_decision::install_at(unconditional_victim(set, rrip_),
                                       priority_rrpv(shct_.predict(ctx.signature), rrip_));
}

void ship_aob_policy::on_evict(const tag_entry& victim, const access_context&)
{
    shct_.train(victim);
}

void ship_aob_policy::describe(nlohmann::ordered_json& out) const
{
    out["shct_entries"] = shct_.entries();
    out["shct_storage_bytes"] = shct_.storage_bytes();
    out["shct_histogram"] = shct_.histogram();
    out["shct_pcless"] = shct_.counter(pcless_signature);
    out["forced_installs"] = forced_installs_;
    out["low_priority_bypasses"] = low_bypasses_;
    out["high_priority_bypasses"] = high_bypasses_;
}

} // namespace dcsim
