#pragma once

#include "stickysim/scalar.hpp"
#include "stickysim/vec.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace stickysim {

/// Seeded deterministic RNG. Avoids std::uniform_*_distribution so streams
/// are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [lo, hi], inclusive.
    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Random rational p/denominator_bound with p in [-bound, bound].
    Scalar rational_in_unit(std::int64_t denominator_bound) {
        return Scalar::rational(int_in(-denominator_bound, denominator_bound), denominator_bound);
    }

    /// Derive an independent child seed (for per-case streams).
    std::uint64_t child_seed(std::uint64_t salt) {
        std::uint64_t x = next_u64() ^ (salt * 0x9e3779b97f4a7c15ull);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        return x;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace stickysim
