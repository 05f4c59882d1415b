#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace synthgame {

/// splitmix64 step; used both as a stream generator for seeding and as the
/// 64-bit mix that derives child seeds (round seeds, per-tree seeds) from a
/// (seed, index) pair. The derivation scheme is part of the reproducibility
/// contract: results must not depend on scheduling order.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + index);
    uint64_t a = splitmix64(s);
    uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

/// Deterministic random source. Wraps std::mt19937_64 (bit-exact across
/// conforming implementations) but performs all value mapping itself, since
/// the standard distributions are not portable. Every draw consumes a fixed,
/// documented number of engine outputs.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(splitmix64_seed(seed)) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1); 53-bit resolution, one engine output.
    double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); unbiased via rejection. n must be > 0.
    uint64_t uniform_below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via inverse-CDF of a single uniform draw. Fixed
    /// consumption (one engine output per variate) keeps consumption counts
    /// identical across label-symmetric code paths.
    double normal() { return inverse_normal_cdf(uniform01_open()); }

    /// Fisher-Yates shuffle, back-to-front.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = size_t(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Uniform sample of k distinct values from {0,..,n-1}, in draw order.
    std::vector<size_t> sample_indices(size_t n, size_t k);

    static double inverse_normal_cdf(double p);
    static double normal_cdf(double x);

private:
    double uniform01_open() {
        // (0,1): rejects exact zero so the inverse CDF stays finite.
        for (;;) {
            double u = uniform01();
            if (u > 0.0) return u;
        }
    }

    static std::mt19937_64 splitmix64_seed(uint64_t seed) {
        uint64_t s = seed;
        return std::mt19937_64(splitmix64(s));
    }

    std::mt19937_64 engine_;
};

} // namespace synthgame
