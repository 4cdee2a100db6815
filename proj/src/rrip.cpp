#include "dcsim/rrip.h"

#include <array>
#include <string>

namespace dcsim {

void rrip_params::validate() const
{
    if (rrpv_max == 0 || rrpv_max > 15)
        throw config_error("rrpv_max must be in 1..15");
    if (insert_rrpv > rrpv_max)
        throw config_error("insert RRPV " + std::to_string(insert_rrpv) + " exceeds rrpv_max");
}

policy_decision rrip2_victim(std::span<const tag_entry> set, const rrip_params& params)
{
    if (auto w = first_invalid(set))
        return policy_decision::install_at(*w, params.insert_rrpv);

    std::array<uint8_t, 2> rrpv{};
    for (unsigned w = 0; w < set.size(); ++w)
        rrpv[w] = set[w].rrpv;

    uint8_t rounds = 0;
    for (;;) {
        for (unsigned w = 0; w < set.size(); ++w) {
            if (rrpv[w] >= params.rrpv_max) {
                auto d = policy_decision::install_at(w, params.insert_rrpv);
                if (rounds) {
                    d.demote_mask = all_ways_mask(set.size());
                    d.demote_rounds = rounds;
                }
                return d;
            }
        }
        for (unsigned w = 0; w < set.size(); ++w)
            ++rrpv[w];
        ++rounds;
    }
}

policy_decision rrip_aob_decide(std::span<const tag_entry> set, const rrip_params& params)
{
    if (auto w = first_invalid(set))
        return policy_decision::install_at(*w, params.insert_rrpv);
    if (auto w = first_with_rrpv_at_least(set, params.rrpv_max))
        return policy_decision::install_at(*w, params.insert_rrpv);
    return policy_decision::bypass(all_ways_mask(set.size()));
}

unsigned unconditional_victim(std::span<const tag_entry> set, const rrip_params& params)
{
    if (auto w = first_invalid(set))
        return *w;
    if (auto w = first_with_rrpv_at_least(set, params.rrpv_max))
        return *w;
    return max_rrpv_way(set);
}

// rrip2_policy

rrip2_policy::rrip2_policy(const cache_geometry& geometry, const rrip_params& params) : params_(params)
{
    params_.validate();
    if (geometry.ways != 2)
        throw config_error("rrip2 requires a 2-way geometry");
}

bool rrip2_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context&)
{
    return rrip_promote(set[way]);
}

policy_decision rrip2_policy::on_miss(std::span<const tag_entry> set, const access_context&)
{
    return rrip2_victim(set, params_);
}

policy_decision rrip2_policy::forced_install(std::span<const tag_entry> set, const access_context&)
{
    return rrip2_victim(set, params_);
}

// rrip_aob_policy

rrip_aob_policy::rrip_aob_policy(const rrip_params& params) : params_(params)
{
    params_.validate();
}

bool rrip_aob_policy::on_hit(std::span<tag_entry> set, unsigned way, const access_context&)
{
    return rrip_promote(set[way]);
}

policy_decision rrip_aob_policy::on_miss(std::span<const tag_entry> set, const access_context&)
{
    return rrip_aob_decide(set, params_);
}

policy_decision rrip_aob_policy::forced_install(std::span<const tag_entry> set, const access_context&)
{
    return policy_decision::install_at(unconditional_victim(set, params_), params_.insert_rrpv);
}

} // namespace dcsim
