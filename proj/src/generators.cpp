#include "dcsim/generators.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>

#include "dcsim/geometry.h"
#include "dcsim/prng.h"

namespace dcsim {

namespace {

constexpr std::array<std::string_view, 6> pattern_names = {"thrash_mix",  "region_stream", "mixed_reuse",
                                                           "write_reuse", "write_stream",  "uniform"};

// Cold streams start far above any hot footprint.
constexpr uint64_t cold_base = uint64_t{1} << 36;

class trace_builder {
public:
    explicit trace_builder(const synth_layout& l) : threads_(std::max(1u, l.threads)) {}

    void add(access_kind kind, uint64_t address, uint64_t pc)
    {
        const uint64_t i = out_.size();
        out_.push_back({static_cast<uint32_t>(i % threads_), kind, address, pc, i});
    }
    void read(uint64_t address, uint64_t pc) { add(access_kind::read, address, pc); }
    void write(uint64_t address) { add(access_kind::write, address, 0); }

    std::vector<access_record> take() { return std::move(out_); }
    void reserve(uint64_t n) { out_.reserve(n); }

private:
    unsigned threads_;
    std::vector<access_record> out_;
};

void check_layout(const synth_layout& l)
{
    if (!is_pow2(l.sets) || !is_pow2(l.line_bytes) || !is_pow2(l.region_bytes) || l.region_bytes < l.line_bytes)
        throw config_error("generator sets, line and region sizes must be powers of two with line <= region");
}

} // namespace

std::string_view to_string(trace_pattern p) { return pattern_names[static_cast<std::size_t>(p)]; }

trace_pattern parse_trace_pattern(std::string_view name)
{
    for (std::size_t i = 0; i < pattern_names.size(); ++i)
        if (pattern_names[i] == name)
            return static_cast<trace_pattern>(i);
    throw config_error("unknown trace pattern '" + std::string(name) + "'");
}

std::vector<access_record> gen_thrash_mix(uint64_t hot, uint64_t cold, uint64_t passes, const synth_layout& l)
{
    check_layout(l);
    if (hot == 0)
        throw config_error("thrash_mix needs at least one hot line");
    trace_builder b(l);
    b.reserve((hot + cold) * passes);
    const uint64_t cold_rounds = (cold + hot - 1) / hot;
    for (uint64_t p = 0; p < passes; ++p) {
        for (uint64_t i = 0; i < hot; ++i)
            b.read(i * l.line_bytes, pc_hot);
        for (uint64_t j = 0; j < cold; ++j) {
            const uint64_t a = (j % hot) * l.line_bytes;
            b.read(a + (1 + p * cold_rounds + j / hot) * l.stride(), pc_cold);
        }
    }
    return b.take();
}

std::vector<access_record> gen_region_stream(uint64_t regions, uint64_t lines_per_region, uint64_t passes,
                                             const synth_layout& l)
{
    check_layout(l);
    const uint64_t lpr = l.region_bytes / l.line_bytes;
    if (lines_per_region > lpr)
        throw config_error("region_stream lines per region exceeds region_bytes / line_bytes");
    std::vector<uint64_t> base(regions);
    for (uint64_t r = 0; r < regions; ++r) {
        const uint64_t pair = r / 2;
        const uint64_t member = r % 2;
        base[r] = ((pair * lpr) % l.sets) * l.line_bytes + (member + 2 * pair) * l.stride();
    }
    trace_builder b(l);
    b.reserve(regions * lines_per_region * passes);
    for (uint64_t p = 0; p < passes; ++p)
        for (uint64_t r = 0; r < regions; ++r)
            for (uint64_t i = 0; i < lines_per_region; ++i)
                b.read(base[r] + i * l.line_bytes, pc_region);
    return b.take();
}

std::vector<access_record> gen_mixed_reuse(uint64_t hot, uint64_t cold_pct, uint64_t length,
                                           const synth_layout& l, bool conflict)
{
    check_layout(l);
    if (hot == 0 || cold_pct > 100)
        throw config_error("mixed_reuse needs hot > 0 and cold_pct <= 100");
    prng rng(mix_seed(l.seed, 0x6d72));
    trace_builder b(l);
    b.reserve(length);
    uint64_t next_cold = 0;
    for (uint64_t i = 0; i < length; ++i) {
        if (rng.below(100) < cold_pct)
            b.read(cold_base + next_cold++ * l.line_bytes, pc_cold);
        else {
            const uint64_t h = rng.below(hot);
            b.read(conflict ? (h / 2) * l.line_bytes + (h % 2) * l.stride() : h * l.line_bytes, pc_hot);
        }
    }
    return b.take();
}

std::vector<access_record> gen_write_reuse(uint64_t lines, uint64_t rewrites, uint64_t interleave,
                                           uint64_t read_lines, const synth_layout& l)
{
    check_layout(l);
    if (interleave > 0 && read_lines == 0)
        throw config_error("interleaved reads need read_lines > 0");
    trace_builder b(l);
    b.reserve(lines * rewrites * (1 + interleave));
    uint64_t next_read = 0;
    for (uint64_t j = 0; j < lines; ++j)
        for (uint64_t k = 0; k < rewrites; ++k) {
            b.write(l.stride() + j * l.line_bytes);
            for (uint64_t r = 0; r < interleave; ++r)
                b.read((next_read++ % read_lines) * l.line_bytes, pc_read);
        }
    return b.take();
}

std::vector<access_record> gen_write_stream(uint64_t lines, uint64_t interleave, uint64_t read_lines,
                                            const synth_layout& l)
{
    return gen_write_reuse(lines, 1, interleave, read_lines, l);
}

std::vector<access_record> gen_uniform(uint64_t footprint, uint64_t length, uint64_t write_pct,
                                       const synth_layout& l)
{
    check_layout(l);
    if (footprint == 0 || write_pct > 100)
        throw config_error("uniform needs footprint > 0 and write_pct <= 100");
    prng rng(mix_seed(l.seed, 0x756e));
    trace_builder b(l);
    b.reserve(length);
    for (uint64_t i = 0; i < length; ++i) {
        const uint64_t a = rng.below(footprint) * l.line_bytes;
        if (rng.below(100) < write_pct)
            b.write(a);
        else
            b.read(a, pc_uniform + 4 * (a / l.region_bytes % 16));
    }
    return b.take();
}

// trace_spec

namespace {

const std::set<std::string>& common_keys()
{
    static const std::set<std::string> keys = {"sets", "line", "region", "threads", "seed"};
    return keys;
}

const std::map<std::string, uint64_t>& pattern_defaults(trace_pattern p)
{
    static const std::map<std::string, uint64_t> thrash = {{"hot", 4}, {"cold", 4}, {"passes", 4}};
    static const std::map<std::string, uint64_t> region = {{"regions", 2}, {"lines", 64}, {"passes", 4}};
    static const std::map<std::string, uint64_t> mixed = {{"hot", 192}, {"cold_pct", 50}, {"length", 100000}, {"conflict", 0}};
    static const std::map<std::string, uint64_t> wreuse = {
        {"lines", 2048}, {"rewrites", 3}, {"interleave", 0}, {"read_lines", 128}};
    static const std::map<std::string, uint64_t> wstream = {{"lines", 4096}, {"interleave", 1}, {"read_lines", 128}};
    static const std::map<std::string, uint64_t> uni = {{"footprint", 4096}, {"length", 10000}, {"write_pct", 20}};
    switch (p) {
    case trace_pattern::thrash_mix: return thrash;
    case trace_pattern::region_stream: return region;
    case trace_pattern::mixed_reuse: return mixed;
    case trace_pattern::write_reuse: return wreuse;
    case trace_pattern::write_stream: return wstream;
    case trace_pattern::uniform: return uni;
    }
    return uni;
}

} // namespace

uint64_t trace_spec::get(const std::string& key, uint64_t fallback) const
{
    auto it = params.find(key);
    if (it != params.end())
        return it->second;
    const auto& d = pattern_defaults(pattern);
    auto dit = d.find(key);
    return dit != d.end() ? dit->second : fallback;
}

synth_layout trace_spec::layout() const
{
    synth_layout l;
    l.sets = get("sets", l.sets);
    l.line_bytes = get("line", l.line_bytes);
    l.region_bytes = get("region", l.region_bytes);
    l.threads = static_cast<unsigned>(get("threads", l.threads));
    l.seed = get("seed", l.seed);
    return l;
}

std::string trace_spec::str() const
{
    std::string s(to_string(pattern));
    char sep = ':';
    for (const auto& [k, v] : params) {
        s += sep;
        s += k + "=" + std::to_string(v);
        sep = ',';
    }
    return s;
}

trace_spec parse_trace_spec(std::string_view text)
{
    trace_spec spec;
    const auto colon = text.find(':');
    spec.pattern = parse_trace_pattern(text.substr(0, colon));
    if (colon == std::string_view::npos)
        return spec;
    std::string_view rest = text.substr(colon + 1);
    const auto& allowed = pattern_defaults(spec.pattern);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw config_error("generator parameter '" + std::string(item) + "' is not key=value");
        const std::string key(item.substr(0, eq));
        const std::string_view value = item.substr(eq + 1);
        if (!allowed.count(key) && !common_keys().count(key))
            throw config_error("unknown parameter '" + key + "' for pattern " + std::string(to_string(spec.pattern)));
        uint64_t v = 0;
        if (key == "line" || key == "region") {
            v = parse_size(value);
        } else {
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || ptr != value.data() + value.size())
                throw config_error("bad value '" + std::string(value) + "' for " + key);
        }
        spec.params[key] = v;
    }
    return spec;
}

std::vector<access_record> generate(const trace_spec& spec)
{
    const synth_layout l = spec.layout();
    switch (spec.pattern) {
    case trace_pattern::thrash_mix:
        return gen_thrash_mix(spec.get("hot", 0), spec.get("cold", 0), spec.get("passes", 0), l);
    case trace_pattern::region_stream:
        return gen_region_stream(spec.get("regions", 0), spec.get("lines", 0), spec.get("passes", 0), l);
    case trace_pattern::mixed_reuse:
        return gen_mixed_reuse(spec.get("hot", 0), spec.get("cold_pct", 0), spec.get("length", 0), l,
                               spec.get("conflict", 0) != 0);
    case trace_pattern::write_reuse:
        return gen_write_reuse(spec.get("lines", 0), spec.get("rewrites", 0), spec.get("interleave", 0),
                               spec.get("read_lines", 0), l);
    case trace_pattern::write_stream:
        return gen_write_stream(spec.get("lines", 0), spec.get("interleave", 0), spec.get("read_lines", 0), l);
    case trace_pattern::uniform:
        return gen_uniform(spec.get("footprint", 0), spec.get("length", 0), spec.get("write_pct", 0), l);
    }
    return {};
}

} // namespace dcsim
