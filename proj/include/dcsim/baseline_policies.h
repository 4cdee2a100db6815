#pragma once

#include <cstdint>
#include <vector>

#include "dcsim/policy.h"
#include "dcsim/prng.h"

namespace dcsim {

/// Install on every miss. In a 2-way cache the victim is the invalid way,
/// else the least-recently-used way (recency bit kept in SRAM).
class always_install_policy : public replacement_policy {
public:
    always_install_policy(const cache_geometry& geometry, std::string_view name = "always");

    std::string_view name() const override { return name_; }
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void on_install(unsigned way, const access_context& ctx) override;

    unsigned lru_way(uint64_t set_index) const;

private:
    std::string name_;
    unsigned ways_;
    std::vector<uint8_t> mru_; // 2-way only: most recently used way per set
};

/// Random victim among valid ways (2-way baseline).
class random_victim_policy : public replacement_policy {
public:
    random_victim_policy(const cache_geometry& geometry, uint64_t seed);

    std::string_view name() const override { return "random2"; }
    bool on_hit(std::span<tag_entry>, unsigned, const access_context&) override { return false; }
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;

private:
    prng rng_;
};

/// Install with probability `install_prob`, otherwise bypass without
/// touching the resident line.
policy_decision bypass_probabilistic_decide(double draw, double install_prob, unsigned install_way);

class bypass90_policy : public replacement_policy {
public:
    bypass90_policy(const cache_geometry& geometry, double install_prob, uint64_t seed);

    std::string_view name() const override { return "bypass90"; }
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void on_install(unsigned way, const access_context& ctx) override;
    void describe(nlohmann::ordered_json& out) const override;

    uint64_t installs_decided() const { return installs_; }
    uint64_t bypasses_decided() const { return bypasses_; }

private:
    always_install_policy victim_; // victim choice for 2-way
    double install_prob_;
    prng rng_;
    uint64_t installs_ = 0;
    uint64_t bypasses_ = 0;
};

/// Set-dueling state for Bandwidth-Aware Bypass: a group of leader sets
/// always installs, another group always runs Bypass-90, and the PSEL
/// counter picks the winner for follower sets.
class duel_state {
public:
    enum class role : uint8_t { follower, install_leader, bypass_leader };

    duel_state(uint64_t num_sets, unsigned leaders_per_policy, unsigned psel_bits);

    role role_of(uint64_t set_index) const;
    unsigned psel() const { return psel_; }
    unsigned psel_max() const { return psel_max_; }
    unsigned midpoint() const { return (psel_max_ + 1) / 2; }
    void set_psel(unsigned v) { psel_ = v > psel_max_ ? psel_max_ : v; }

    /// Followers run Bypass-90 when PSEL is at or above the midpoint.
    bool followers_bypass() const { return psel_ >= midpoint(); }

    /// Miss bookkeeping: install-leader misses push PSEL toward Bypass-90,
    /// bypass-leader misses push it back.
    void record_miss(uint64_t set_index);

    unsigned leaders_per_policy() const { return leaders_; }

private:
    uint64_t stride_;
    unsigned leaders_;
    unsigned psel_max_;
    unsigned psel_;
};

class bab_policy : public replacement_policy {
public:
    bab_policy(const cache_geometry& geometry, const policy_params& params, uint64_t seed);

    std::string_view name() const override { return "bab"; }
    bool on_hit(std::span<tag_entry> set, unsigned way, const access_context& ctx) override;
    policy_decision on_miss(std::span<const tag_entry> set, const access_context& ctx) override;
    policy_decision forced_install(std::span<const tag_entry> set, const access_context& ctx) override;
    void on_install(unsigned way, const access_context& ctx) override;
    void describe(nlohmann::ordered_json& out) const override;

    duel_state& duel() { return duel_; }
    const duel_state& duel() const { return duel_; }

private:
    always_install_policy victim_;
    duel_state duel_;
    double install_prob_;
    prng rng_;
};

} // namespace dcsim
