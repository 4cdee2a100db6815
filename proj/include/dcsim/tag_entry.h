#pragma once

#include <cstdint>

namespace dcsim {

inline constexpr uint8_t rrpv_bits = 2;
inline constexpr uint8_t rrpv_distant = (1u << rrpv_bits) - 1; // 3
inline constexpr uint16_t signature_bits = 12;

/// Per-line state held in the spare ECC bits of a DRAM-cache line.
struct tag_entry {
    uint64_t tag = 0;
    uint16_t signature = 0;
    uint8_t thread_id = 0;
    uint8_t rrpv = rrpv_distant;
    bool valid = false;
    bool dirty = false;
    bool r_bit = false;
    bool wa_bit = false;
};

} // namespace dcsim
