#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dcsim/record.h"

namespace dcsim {

enum class trace_pattern : uint8_t { thrash_mix, region_stream, mixed_reuse, write_reuse, write_stream, uniform };

std::string_view to_string(trace_pattern p);
trace_pattern parse_trace_pattern(std::string_view name);

/// Where synthetic traces land. `sets` is the direct-mapped set count the
/// conflicts are aimed at; lines `sets * line_bytes` apart share a set.
struct synth_layout {
    uint64_t sets = 256;
    uint64_t line_bytes = 64;
    uint64_t region_bytes = 4096;
    unsigned threads = 1;
    uint64_t seed = 1;

    uint64_t stride() const { return sets * line_bytes; }
};

// Fixed PCs so signature-based policies see stable streams.
inline constexpr uint64_t pc_hot = 0x400100;
inline constexpr uint64_t pc_cold = 0x400200;
inline constexpr uint64_t pc_region = 0x400300;
inline constexpr uint64_t pc_read = 0x400400;
inline constexpr uint64_t pc_uniform = 0x400500;

/// Per pass: `hot` A-block reads, then `cold` B-block reads that conflict
/// set-wise with A. B lines are fresh every pass.
std::vector<access_record> gen_thrash_mix(uint64_t hot, uint64_t cold, uint64_t passes, const synth_layout& l);

/// Sequential walk of each region, regions round-robin, `passes` times.
/// Regions 2k and 2k+1 cover the same set range.
std::vector<access_record> gen_region_stream(uint64_t regions, uint64_t lines_per_region, uint64_t passes,
                                             const synth_layout& l);

/// `length` reads: with probability cold_pct/100 the next line of a
/// never-repeating stream, else a uniform pick from `hot` lines. With
/// `conflict` set, hot lines come in pairs that share a direct-mapped set.
std::vector<access_record> gen_mixed_reuse(uint64_t hot, uint64_t cold_pct, uint64_t length,
                                           const synth_layout& l, bool conflict = false);

/// Each of `lines` write lines is written `rewrites` times before moving
/// on. Every write is followed by `interleave` reads cycling through
/// `read_lines` lines that share sets with the writes.
std::vector<access_record> gen_write_reuse(uint64_t lines, uint64_t rewrites, uint64_t interleave,
                                           uint64_t read_lines, const synth_layout& l);

/// gen_write_reuse with one write per line.
std::vector<access_record> gen_write_stream(uint64_t lines, uint64_t interleave, uint64_t read_lines,
                                            const synth_layout& l);

/// Uniform random lines out of `footprint`, writes with probability
/// write_pct/100.
std::vector<access_record> gen_uniform(uint64_t footprint, uint64_t length, uint64_t write_pct,
                                       const synth_layout& l);

/// Textual generator spec: `pattern[:key=value,...]`, e.g.
/// `region_stream:regions=2,lines=64,passes=4,sets=256`.
struct trace_spec {
    trace_pattern pattern = trace_pattern::uniform;
    std::map<std::string, uint64_t> params;

    uint64_t get(const std::string& key, uint64_t fallback) const;
    synth_layout layout() const;
    /// Canonical spelling with keys sorted.
    std::string str() const;
};

/// Throws config_error on unknown patterns or keys.
trace_spec parse_trace_spec(std::string_view text);

std::vector<access_record> generate(const trace_spec& spec);

} // namespace dcsim
