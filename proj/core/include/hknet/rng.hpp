// Deterministic pseudo-random numbers (splitmix64). The standard library's
// distributions are implementation-defined, so anything that must reproduce
// byte-identical output across toolchains and worker counts draws from this.
#pragma once

#include <cstdint>

namespace hknet {

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent stream for a (seed, a, b, c) coordinate; used to give every
// trial and every placement its own generator regardless of execution order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t z = mix64(seed ^ 0x5851f42d4c957f2dull);
    z = mix64(z ^ mix64(a + 0x9e3779b97f4a7c15ull));
    z = mix64(z ^ mix64(b + 0xbf58476d1ce4e5b9ull));
    z = mix64(z ^ mix64(c + 0x94d049bb133111ebull));
    return z;
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix64(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection; bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

  private:
    std::uint64_t state_;
};

}  // namespace hknet
