#ifndef QUBOLAB_RNG_HPP
#define QUBOLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace qubolab {

// Deterministic RNG wrapper. mt19937_64's output sequence is fixed by the
// standard; the derived draws below avoid std::uniform_*_distribution, whose
// results are implementation-defined, so streams replay identically everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Unbiased integer in [0, bound) via power-of-two rejection. bound > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t mask = ~std::uint64_t{0} >> countl_zero_(bound - 1);
        std::uint64_t x;
        do {
            x = next_u64() & mask;
        } while (x >= bound);
        return x;
    }

private:
    static int countl_zero_(std::uint64_t v) {
        int c = 0;
        for (std::uint64_t probe = std::uint64_t{1} << 63; probe && !(v & probe); probe >>= 1) ++c;
        return c;
    }

    std::mt19937_64 gen_;
};

}  // namespace qubolab

#endif
