#pragma once

#include <cstdint>
#include <vector>

#include "dcsim/policy.h"
#include "dcsim/prng.h"
#include "dcsim/rrip.h"

namespace dcsim {

/// Signature value reserved for records without a PC (writebacks).
inline constexpr uint16_t pcless_signature = 1u << signature_bits;

/// 12-bit XOR fold of PC bits [2,14) ^ [14,26) ^ [26,38). pc == 0 maps to
/// the PC-less slot.
constexpr uint16_t make_signature(uint64_t pc)
{
    if (pc == 0)
        return pcless_signature;
    constexpr uint64_t mask = (1u << signature_bits) - 1;
    return static_cast<uint16_t>(((pc >> 2) ^ (pc >> 14) ^ (pc >> 26)) & mask);
}

enum class reuse_priority : uint8_t { high, low };

/// Signature History Counter Table plus one extra counter for PC-less
/// records.
class shct_table {
public:
    static constexpr std::size_t default_entries = 4096;
    static constexpr unsigned default_bits = 3;

    shct_table(std::size_t entries = default_entries, unsigned counter_bits = default_bits,
               unsigned initial = 1);

    std::size_t entries() const { return counters_.size() - 1; }
    unsigned counter_bits() const { return bits_; }
    unsigned counter_max() const { return max_; }
    unsigned initial_value() const { return initial_; }

    unsigned counter(uint16_t signature) const { return counters_[slot(signature)]; }
    void set_counter(uint16_t signature, unsigned value);

    /// Zero counter predicts no reuse.
    reuse_priority predict(uint16_t signature) const
    {
        return counter(signature) == 0 ? reuse_priority::low : reuse_priority::high;
    }

    /// Eviction training: reused lines strengthen their signature, dead
    /// lines weaken it. Saturates at both ends.
    void train(const tag_entry& victim);

    /// Bytes for the signature counters (the PC-less counter is excluded).
    std::size_t storage_bytes() const { return entries() * bits_ / 8; }

    /// Number of counters at each value 0..counter_max.
    std::vector<uint64_t> histogram() const;

private:
    std::size_t slot(uint16_t signature) const
    {
        return signature == pcless_signature ? counters_.size() - 1 : (signature & (entries() - 1));
    }

    unsigned bits_;
    unsigned max_;
    unsigned initial_;
    std::vector<uint8_t> counters_;
};

/// Pure SHiP-AOB decision. `force_install` is the outcome of the occasional
/// forced-install draw and only matters when the line would otherwise be
/// bypassed.
policy_decision ship_aob_decide(std::span<const tag_entry> set, reuse_priority priority,
                                bool force_install, const rrip_params& params);

inline uint8_t priority_rrpv(reuse_priority p, const rrip_params& params)
{
    return p == reuse_priority::high ? params.insert_rrpv : params.rrpv_max;
}

class ship_aob_policy : public replacement_policy {
public:
    ship_aob_policy(const rrip_params& rrip, const policy_params& params, uint64_t seed);

    std::string_view name() const override { return "ship-aob"; }
    bool tracks_rrpv() const override { return true; }
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void on_evict(const tag_entry& victim, const access_context& ctx) override;
    void describe(nlohmann::ordered_json& out) const override;

    shct_table& shct() { return shct_; }
    const shct_table& shct() const { return shct_; }

    uint64_t forced_installs() const { return forced_installs_; }
    uint64_t low_priority_bypasses() const { return low_bypasses_; }

private:
    rrip_params rrip_;
    shct_table shct_;
    double force_prob_;
    prng rng_;
    uint64_t forced_installs_ = 0;
    uint64_t low_bypasses_ = 0;
    uint64_t high_bypasses_ = 0;
};

} // namespace dcsim
