#pragma once

// Deterministic random source. std::uniform_*_distribution and std::shuffle
// are implementation-defined, so every derivation here is spelled out by hand
// on top of the mt19937_64 bit stream; identical seeds give identical streams
// on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mlrm/error.hpp"

namespace mlrm {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Uniform integer in [0, n). Lemire multiply-shift, debiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) fail(Err::InvalidSize, "Rng::below requires n > 0");
        __uint128_t m = static_cast<__uint128_t>(gen_()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(gen_()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    // Standard normal via Box-Muller, one spare cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(theta);
        have_spare_ = true;
        return radius * std::cos(theta);
    }

    // Fisher-Yates, explicit so the visit order is pinned down.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            std::size_t j = index(i + 1);
            std::swap(v[i], v[j]);
        }
    }

    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        shuffle(p);
        return p;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mlrm
