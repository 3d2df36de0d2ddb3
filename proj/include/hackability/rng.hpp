#pragma once

#include <cstdint>

namespace hackability::core {

// SplitMix64. Self-contained so that sampled instances and policies are
// byte-identical across platforms and standard libraries (the distributions in
// <random> are implementation-defined).
class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); unbiased via rejection. n must be nonzero.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t v = next_u64();
            if (v >= threshold) return v % n;
        }
    }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // Independent stream for the index-th draw of a seeded family. Streams
    // depend only on (seed, index), so prefixes agree across budget sizes.
    static DetRng substream(std::uint64_t seed, std::uint64_t index) {
        DetRng scramble(index ^ 0xA3C59AC2F0534855ull);
        return DetRng(seed ^ scramble.next_u64());
    }

  private:
    std::uint64_t state_;
};

}  // namespace hackability::core
