#pragma once

#include <cstdint>

namespace dsmetric {

// 64-bit linear congruential generator with Knuth's MMIX constants.
// Deliberately tiny and fully specified so that seeded runs (cross-validation
// folds, synthetic corpora) reproduce bit-for-bit anywhere.
struct Lcg64 {
    std::uint64_t state;

    explicit Lcg64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state;
    }

    // uniform in [0,1), 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n); plain modulo, bias is irrelevant at our n
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

}  // namespace dsmetric
