#include "dcsim/geometry.h"

#include <cctype>
#include <charconv>
#include <string>

namespace dcsim {

void cache_geometry::validate() const
{
    if (!is_pow2(capacity_bytes))
        throw config_error("cache capacity must be a power of two");
    if (!is_pow2(line_bytes))
        throw config_error("line size must be a power of two");
    if (!is_pow2(region_bytes))
        throw config_error("region size must be a power of two");
    if (region_bytes < line_bytes)
        throw config_error("region size must be at least one line");
    if (ways != 1 && ways != 2)
        throw config_error("ways must be 1 or 2");
    if (capacity_bytes < line_bytes * ways)
        throw config_error("capacity too small for one set");
    if (!is_pow2(num_sets()))
        throw config_error("number of sets must be a power of two");
    if (!is_pow2(memory_bytes) || memory_bytes < capacity_bytes)
        throw config_error("memory size must be a power of two no smaller than the cache");
}

cache_geometry cache_geometry::make(uint64_t capacity_bytes, uint64_t line_bytes, unsigned ways,
                                    uint64_t region_bytes)
{
    cache_geometry g;
    g.capacity_bytes = capacity_bytes;
    g.line_bytes = line_bytes;
    g.ways = ways;
    g.region_bytes = region_bytes;
    if (g.memory_bytes < capacity_bytes)
        g.memory_bytes = capacity_bytes;
    g.validate();
    return g;
}

cache_geometry cache_geometry::with_sets(uint64_t num_sets, unsigned ways, uint64_t line_bytes,
                                         uint64_t region_bytes)
{
    return make(num_sets * ways * line_bytes, line_bytes, ways, region_bytes);
}

uint64_t parse_size(std::string_view text)
{
    auto fail = [&] { return config_error("invalid size: '" + std::string(text) + "'"); };
    if (text.empty())
        throw fail();
    int base = 10;
    std::string_view digits = text;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        base = 16;
        digits.remove_prefix(2);
    }
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
    if (ec != std::errc() || ptr == digits.data())
        throw fail();
    std::string suffix(ptr, digits.data() + digits.size());
    for (auto& c : suffix)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (!suffix.empty() && suffix.back() == 'B')
        suffix.pop_back();
    unsigned shift = 0;
    if (suffix.empty())
        shift = 0;
    else if (suffix == "K")
        shift = 10;
    else if (suffix == "M")
        shift = 20;
    else if (suffix == "G")
        shift = 30;
    else if (suffix == "T")
        shift = 40;
    else
        throw fail();
    if (shift && (value >> (64 - shift)) != 0)
        throw fail();
    return value << shift;
}

std::string format_size(uint64_t bytes)
{
    static constexpr const char* units[] = {"", "KB", "MB", "GB", "TB"};
    unsigned u = 0;
    while (u < 4 && bytes != 0 && bytes % 1024 == 0) {
        bytes /= 1024;
        ++u;
    }
    return std::to_string(bytes) + units[u];
}

} // namespace dcsim
