#pragma once

#include <cstdint>

namespace divlab::numkit {

// Counter-based stream: draw i is a pure function of (seed, i), so any draw
// can be reproduced without replaying the ones before it, and forked
// substreams are cheap. The mixer is the SplitMix64 finalizer.
//
// Draw accounting (part of the format contract for anything that serializes
// a stream position):
//   next_u64      consumes 1 counter tick
//   next_uniform  consumes 1
//   next_below    consumes 1
//   next_gaussian consumes 2
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() {
        ++counter_;
        return mix64(seed_ + counter_ * kGolden);
    }

    // Uniform on [0, 1), 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). n must be >= 1; modulo bias is irrelevant at
    // the n values used here (n << 2^64).
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    // Standard normal via the trigonometric Box-Muller map: always exactly two
    // uniforms, no rejection loop, no cached spare.
    double next_gaussian();

    // Independent stream derived from (seed, id); does not advance this one.
    RandomStream fork(std::uint64_t stream_id) const {
        return RandomStream(mix64(seed_ ^ mix64(stream_id + kForkSalt)), 0);
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kForkSalt = 0xA0761D6478BD642FULL;

    std::uint64_t seed_;
    std::uint64_t counter_;
};

} // namespace divlab::numkit
