#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dcsim {

/// Raised for invalid user-facing configuration (bad geometry, unknown
/// policy, malformed option values). The CLI maps it to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr unsigned address_bits = 48;
inline constexpr uint64_t address_mask = (uint64_t{1} << address_bits) - 1;

constexpr bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr unsigned log2_exact(uint64_t v)
{
    unsigned n = 0;
    while (v > 1) {
        v >>= 1;
        ++n;
    }
    return n;
}

struct address_parts {
    uint64_t set_index = 0;
    uint64_t tag = 0;
    uint64_t region_id = 0;

    friend bool operator==(const address_parts&, const address_parts&) = default;
};

/// Shape of the DRAM cache. num_sets is derived; use make() to validate.
struct cache_geometry {
    uint64_t capacity_bytes = uint64_t{2} << 30;
    uint64_t line_bytes = 64;
    unsigned ways = 1;
    uint64_t region_bytes = 4096;
    // Backing memory size; only used by the metadata bit-budget audit.
    uint64_t memory_bytes = uint64_t{64} << 30;

    uint64_t num_sets() const { return capacity_bytes / (line_bytes * ways); }
    uint64_t num_lines() const { return capacity_bytes / line_bytes; }
    uint64_t lines_per_region() const { return region_bytes / line_bytes; }

    /// Throws config_error if any invariant is violated.
    void validate() const;

    static cache_geometry make(uint64_t capacity_bytes, uint64_t line_bytes, unsigned ways,
                               uint64_t region_bytes = 4096);

    /// Geometry with a given number of sets, handy for desk-scale experiments.
    static cache_geometry with_sets(uint64_t num_sets, unsigned ways, uint64_t line_bytes = 64,
                                    uint64_t region_bytes = 4096);

    friend bool operator==(const cache_geometry&, const cache_geometry&) = default;
};

inline address_parts decompose(uint64_t address, const cache_geometry& g)
{
    const uint64_t a = address & address_mask;
    const uint64_t line = a / g.line_bytes;
    return {line % g.num_sets(), line / g.num_sets(), a / g.region_bytes};
}

/// Inverse of decompose for a line: the line-aligned byte address.
inline uint64_t line_address(uint64_t set_index, uint64_t tag, const cache_geometry& g)
{
    return (tag * g.num_sets() + set_index) * g.line_bytes;
}

/// Parses "4096", "4KB", "2GB", "64k", "0x1000" into a byte count.
uint64_t parse_size(std::string_view text);
std::string format_size(uint64_t bytes);

} // namespace dcsim
