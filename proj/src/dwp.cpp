#include "dcsim/dwp.h"

namespace dcsim {

dwp_state::dwp_state(unsigned threads, unsigned counter_bits, unsigned initial)
    : bits_(counter_bits), max_((1u << counter_bits) - 1)
{
    if (threads == 0)
        throw config_error("DWP needs at least one thread counter");
    if (counter_bits == 0 || counter_bits > 8)
        throw config_error("DWP counter width must be 1..8 bits");
    if (initial > max_)
        throw config_error("DWP initial value exceeds counter range");
    counters_.assign(threads, static_cast<uint8_t>(initial));
}

void dwp_state::set_counter(unsigned thread_id, unsigned value)
{
    counters_[thread_id % counters_.size()] = static_cast<uint8_t>(value > max_ ? max_ : value);
}

void dwp_state::on_evict(const tag_entry& victim)
{
    if (!victim.wa_bit)
        return;
    uint8_t& c = counters_[victim.thread_id % counters_.size()];
    if (victim.r_bit) {
        if (c < max_)
            ++c;
    } else if (c > 0) {
        --c;
    }
}

void dwp_on_install(tag_entry& line, bool was_write_miss, unsigned thread_id)
{
    line.wa_bit = was_write_miss;
    line.r_bit = false;
    line.thread_id = static_cast<uint8_t>(thread_id);
}

dwp_policy::dwp_policy(std::unique_ptr<replacement_policy> inner, const policy_params& params)
    : inner_(std::move(inner)),
      state_(params.dwp_threads, params.dwp_bits, params.dwp_init),
      name_(std::string(inner_->name()) + "+dwp")
{
}

bool dwp_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx)
{
    return inner_->on_hit(set, way, ctx);
}

policy_decision dwp_policy::on_miss(std::span<const tag_entry> set, const access_context& ctx)
{
    if (ctx.record.is_write() && state_.allocate_writes(ctx.record.thread_id)) {
        ++overrides_;
        return inner_->forced_install(set, ctx);
    }
    return inner_->on_miss(set, ctx);
}

policy_decision dwp_policy::forced_install(std::span<const tag_entry> set, const access_context& ctx)
{
    return inner_->forced_install(set, ctx);
}

void dwp_policy::on_evict(const tag_entry& victim, const access_context& ctx)
{
    state_.on_evict(victim);
    inner_->on_evict(victim, ctx);
}

void dwp_policy::on_install(unsigned way, const access_context& ctx)
{
    inner_->on_install(way, ctx);
}

void dwp_policy::describe(nlohmann::ordered_json& out) const
{
    inner_->describe(out);
    nlohmann::ordered_json dwp;
    dwp["counters"] = state_.counters();
    dwp["storage_bits"] = state_.storage_bits();
    dwp["write_allocate_overrides"] = overrides_;
    out["dwp"] = std::move(dwp);
}

} // namespace dcsim
