#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dcsim/geometry.h"
#include "dcsim/record.h"
#include "dcsim/tag_entry.h"

namespace dcsim {

/// What a policy wants done on a miss. Demotions are applied to every valid
/// way in demote_mask, demote_rounds times, before any install.
struct policy_decision {
    enum class action_kind : uint8_t { install, bypass };

    action_kind action = action_kind::install;
    uint8_t way = 0;
    uint8_t insert_rrpv = 2;
    uint8_t demote_mask = 0;
    uint8_t demote_rounds = 0;

    bool is_install() const { return action == action_kind::install; }
    bool is_bypass() const { return action == action_kind::bypass; }
    bool demotes() const { return demote_mask != 0 && demote_rounds != 0; }

    static policy_decision install_at(unsigned way, uint8_t insert_rrpv = 2)
    {
        policy_decision d;
        d.way = static_cast<uint8_t>(way);
        d.insert_rrpv = insert_rrpv;
        return d;
    }
    static policy_decision bypass(uint8_t demote_mask = 0)
    {
        policy_decision d;
        d.action = action_kind::bypass;
        d.demote_mask = demote_mask;
        d.demote_rounds = demote_mask ? 1 : 0;
        return d;
    }

    friend bool operator==(const policy_decision&, const policy_decision&) = default;
};

struct access_context {
    const access_record& record;
    address_parts parts;
    uint16_t signature = 0;
};

/// Tunables shared by the policy family. Defaults are the reference values.
struct policy_params {
    // RRIP
    uint8_t rrpv_max = rrpv_distant;
    uint8_t insert_rrpv = 2;
    // Bypass-90 / BAB
    double bypass_install_prob = 0.10;
    unsigned bab_leader_sets = 32;
    unsigned bab_psel_bits = 10;
    // ETR
    unsigned rbt_entries = 128;
    // SHiP
    unsigned shct_entries = 4096;
    unsigned shct_bits = 3;
    unsigned shct_init = 1;
    double force_install_pct = 2.0;
    // ACCORD
    unsigned rit_entries = 128;
    double pws_bias = 0.85;
    // DWP
    unsigned dwp_bits = 3;
    unsigned dwp_threads = 8;
    unsigned dwp_init = 0;

    uint64_t seed = 1;
};

/// Replacement/bypass policy contract driven by the access engine.
///
/// The engine owns the tag store and all ledger accounting. A policy only
/// inspects the set and returns decisions; side tables (RBT, SHCT, ...)
/// live inside the policy.
class replacement_policy {
public:
    virtual ~replacement_policy() = default;

    virtual std::string_view name() const = 0;

    /// True when hits promote RRPV and the RRPV field is meaningful.
    virtual bool tracks_rrpv() const { return false; }

    /// Way probed first on lookup. Policies without a way predictor return
    /// nullopt and all ways are read by a single lookup.
    virtual std::optional<unsigned> predict_way(const access_context&) const { return std::nullopt; }

    /// Called on a hit after the engine set r_bit (and dirty on writes).
    /// Returns true if the line's replacement state changed in DRAM, i.e. a
    /// Promote transaction is needed.
    virtual bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) = 0;

    virtual policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) = 0;

    /// Install without consulting replacement state for a bypass decision.
    /// Used by write-allocate overrides; region-tracking policies record the
    /// install so later accesses to the region follow it.
    virtual policy_decision forced_install(std::span<const tag_entry> set,
                                           const access_context& ctx) = 0;

    /// Called with the victim before it is overwritten.
    virtual void on_evict(const tag_entry& /*victim*/, const access_context&) {}

    /// Called after an install has been written into `way`.
    virtual void on_install(unsigned /*way*/, const access_context&) {}

    virtual void describe(nlohmann::ordered_json& /*out*/) const {}
};

// Helpers shared by several policies.

inline std::optional<unsigned> first_invalid(std::span<const tag_entry> set)
{
    for (unsigned w = 0; w < set.size(); ++w)
        if (!set[w].valid)
            return w;
    return std::nullopt;
}

inline std::optional<unsigned> first_with_rrpv_at_least(std::span<const tag_entry> set, uint8_t rrpv)
{
    for (unsigned w = 0; w < set.size(); ++w)
        if (set[w].valid && set[w].rrpv >= rrpv)
            return w;
    return std::nullopt;
}

/// Lowest-indexed way holding the largest RRPV.
inline unsigned max_rrpv_way(std::span<const tag_entry> set)
{
    unsigned best = 0;
    for (unsigned w = 1; w < set.size(); ++w)
        if (set[w].rrpv > set[best].rrpv)
            best = w;
    return best;
}

inline uint8_t all_ways_mask(std::size_t ways) { return static_cast<uint8_t>((1u << ways) - 1); }

} // namespace dcsim
