#pragma once

#include <cstdint>

namespace pinball {

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Counter-based SplitMix64: value k of the stream is
/// mix(seed + (k + 1) * golden). Independent of call order elsewhere.
class RandomStream {
public:
    explicit constexpr RandomStream(std::uint64_t seed) : seed_(seed) {}

    /// Stream for task `index` of a run seeded with `seed`.
    static constexpr RandomStream derive(std::uint64_t seed, std::uint64_t index) {
        return RandomStream(splitmix_mix(seed ^ splitmix_mix(index + kGolden)));
    }

    constexpr std::uint64_t value(std::uint64_t k) const { return splitmix_mix(seed_ + (k + 1) * kGolden); }

    std::uint64_t next() { return value(counter_++); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in (lo, hi); redraws the endpoint lo.
    double uniform(double lo, double hi) {
        double x = lo;
        while (x <= lo || x >= hi) x = lo + (hi - lo) * uniform();
        return x;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace pinball
