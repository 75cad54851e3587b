#pragma once

#include <cstdint>

namespace maxdyn {

// Deterministic 64-bit generator (splitmix64). Chosen over std::mt19937_64 +
// std::uniform_int_distribution because the distribution's output is
// implementation-defined; this stream produces the same vertex choices on
// every platform for a given seed.
class RngStream {
public:
    static constexpr const char* algorithm = "splitmix64";

    explicit RngStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, bound) via rejection on the modulo threshold.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

// Seed-splitting rule: trial i of a run with master seed m is seeded with
// mix(m ^ mix(i + 1)), where mix is the splitmix64 finalizer. Trials are
// therefore reproducible independently of execution order.
inline std::uint64_t mix_u64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix_u64(master_seed ^ mix_u64(index + 1));
}

}  // namespace maxdyn
