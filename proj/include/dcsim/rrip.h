#pragma once

#include "dcsim/policy.h"

namespace dcsim {

struct rrip_params {
    uint8_t rrpv_max = rrpv_distant;
    uint8_t insert_rrpv = 2;

    /// Throws config_error unless 0 <= insert_rrpv <= rrpv_max.
    void validate() const;
};

/// Hit handling shared by all RRPV-bearing policies: RRPV goes to 0 and a
/// Promote is owed only if the value actually changed.
inline bool rrip_promote(tag_entry& line)
{
    const bool changed = line.rrpv != 0;
    line.rrpv = 0;
    return changed;
}

/// Classic RRIP victim search for a set: first invalid way, else the first
/// way at rrpv_max scanning from way 0, aging every way by one per failed
/// scan. Always installs.
policy_decision rrip2_victim(std::span<const tag_entry> set, const rrip_params& params);

/// Age-On-Bypass: install over an invalid or distant (rrpv_max) line,
/// otherwise bypass and age every resident way by one.
policy_decision rrip_aob_decide(std::span<const tag_entry> set, const rrip_params& params);

/// Way used when installing without a bypass check: invalid way, else the
/// first distant way, else the oldest way.
unsigned unconditional_victim(std::span<const tag_entry> set, const rrip_params& params);

class rrip2_policy : public replacement_policy {
public:
    rrip2_policy(const cache_geometry& geometry, const rrip_params& params);

    std::string_view name() const override { return "rrip2"; }
    bool tracks_rrpv() const override { return true; }
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;

private:
    rrip_params params_;
};

class rrip_aob_policy : public replacement_policy {
public:
    explicit rrip_aob_policy(const rrip_params& params);

    std::string_view name() const override { return "rrip-aob"; }
    bool tracks_rrpv() const override { return true; }
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;

    const rrip_params& params() const { return params_; }

private:
    rrip_params params_;
};

} // namespace dcsim
