#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace hws::rng {

// All randomness in the project flows through this header so that runs are
// reproducible bit-for-bit from their seeds. Raw engine output is converted
// to doubles by hand instead of through std::*_distribution, whose output is
// implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stateless mix of two words; used to freeze per-key noise.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

inline double toUnit(std::uint64_t word) {
    // 53 high bits -> [0, 1)
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return toUnit(engine_()); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double gaussian() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        // Box-Muller on two fresh uniforms; log(0) avoided by the +eps draw.
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        haveSpare_ = true;
        return r * std::cos(theta);
    }

    /// Unbiased integer in [0, k). k must be > 0.
    std::uint64_t below(std::uint64_t k) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % k;
        std::uint64_t word = 0;
        do {
            word = engine_();
        } while (word >= limit);
        return word % k;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        // Fisher-Yates with our own index draws, independent of std::shuffle.
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool haveSpare_ = false;
};

/// Standard normal frozen per (seed, key) pair: the same pair always yields
/// the same draw, across calls and across processes.
inline double frozenGaussian(std::uint64_t seed, std::uint64_t key) {
    std::uint64_t state = mix(seed, key);
    double u1 = 0.0;
    do {
        u1 = toUnit(splitmix64(state));
    } while (u1 <= 0.0);
    const double u2 = toUnit(splitmix64(state));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace hws::rng
