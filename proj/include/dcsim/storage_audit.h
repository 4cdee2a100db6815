#pragma once

#include <cstddef>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "dcsim/geometry.h"
#include "dcsim/policy.h"

namespace dcsim {

/// Modeled ECC bits available per line for tag and replacement metadata.
inline constexpr unsigned ecc_metadata_budget_bits = 28;

/// Per-line metadata carried in the ECC bits.
struct line_metadata_bits {
    unsigned tag = 0;
    unsigned valid = 1;
    unsigned dirty = 1;
    unsigned rrpv = 2;
    unsigned signature = 12;
    unsigned r_bit = 1;
    unsigned wa_bit = 1;

    unsigned total() const { return tag + valid + dirty + rrpv + signature + r_bit + wa_bit; }
    bool fits() const { return total() <= ecc_metadata_budget_bits; }
};

/// Tag width needed to cover memory_bytes of backing store.
line_metadata_bits metadata_bits(const cache_geometry& g);

/// SRAM side-structure sizes for a parameter set.
struct sram_budget {
    std::size_t rbt_bytes = 0;
    std::size_t rit_bytes = 0;
    std::size_t shct_bytes = 0;
    std::size_t dwp_bits = 0;
};

sram_budget sram_storage(const policy_params& p);

void describe_storage(const cache_geometry& g, const policy_params& p, nlohmann::ordered_json& out);

} // namespace dcsim
