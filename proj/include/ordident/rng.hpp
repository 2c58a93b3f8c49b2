#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ordident {

// Deterministic random stream. A seed fully determines the output sequence,
// and substream(i) derives an independent stream from (seed, i) so that
// sampling different expression leaves or calibration repetitions never
// shares state.
//
// Splitting rule: substream i carries the derived seed
// splitmix64(seed ^ (i+1) * 0x9E3779B97F4A7C15). splitmix64 is the standard
// 64-bit finalizer (Steele, Lea, Flood 2014); distinct (seed, i) pairs map
// to well-separated engine states.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed)
        : seed_(seed), engine_(splitmix64(seed ^ kGamma)) {}

    // Uniform on the open interval (0,1): (x >> 11) + 0.5 scaled by 2^-53.
    // Never returns 0 or 1, so quantile transforms stay finite.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    // Fisher-Yates. Hand-rolled because std::shuffle's draw sequence is
    // implementation-defined and permutation tests must replay exactly.
    template <class T>
    void shuffle(std::span<T> v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    RngStream substream(std::uint64_t index) const {
        return RngStream(splitmix64(seed_ ^ (index + 1) * kGamma));
    }

    std::uint64_t seed() const noexcept { return seed_; }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += kGamma;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace ordident
