#pragma once

#include <cstdint>
#include <vector>

namespace tsl::detail {

// Deterministic generator with a fixed bit-to-double mapping, so seeded draws
// are reproducible across platforms and standard-library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {
        // warm up splitmix so small seeds decorrelate
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform in [-1, 1).
    double symmetric() { return uniform(-1.0, 1.0); }

    std::vector<double> symmetric_vec(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = symmetric();
        return v;
    }

private:
    std::uint64_t state_;
};

} // namespace tsl::detail
