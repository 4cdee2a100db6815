#pragma once

#include <cstdint>
#include <random>

namespace dcsim {

/// Seedable 64-bit generator (mt19937_64). Conversions to doubles and ranges
/// are spelled out here rather than using std distributions, whose output is
/// not specified across standard libraries.
class prng {
public:
    explicit prng(uint64_t seed = 0) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n). n must be non-zero.
    uint64_t below(uint64_t n)
    {
        // Lemire's multiply-shift with rejection.
        for (;;) {
            const unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
            const auto low = static_cast<uint64_t>(m);
            if (low >= n || low >= (-n) % n)
                return static_cast<uint64_t>(m >> 64);
        }
    }

    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; derives independent stream seeds from one run seed.
constexpr uint64_t mix_seed(uint64_t seed, uint64_t stream)
{
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace dcsim
