#pragma once

#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace srg {

//============================================================================
// Deterministic random number streams.
//
// Every stochastic routine in the library draws from an RngStream identified
// by (seed, stream id).  Identical (seed, stream) pairs reproduce identical
// draw sequences on every platform: the generator (xoshiro256**) and all
// variate transformations are implemented here, without relying on
// implementation-defined standard-library distributions.  Work that may be
// parallelised is assigned sub-streams up front so results do not depend on
// thread count or scheduling.
//============================================================================

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64(s);
}
} // namespace detail

class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {
        // Expand (seed, stream) into 256 bits of state via splitmix64.
        std::uint64_t s = seed ^ detail::mix64(stream ^ 0xA3C59AC2ED9E86E2ULL);
        for (auto& w : s_) w = detail::splitmix64(s);
        // xoshiro must not start from the all-zero state.
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Derived stream for independent sub-tasks (replicates, workers, ...).
    RngStream substream(std::uint64_t k) const {
        return RngStream(seed_, detail::mix64(stream_ + 0x9E3779B97F4A7C15ULL * (k + 1)));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    /// Exponential variate with the given rate (mean 1/rate).
    double exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return -std::log1p(-u) / rate;
    }

    /// Unbiased integer in {0, ..., n-1}.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
        // Rejection from the top of the 64-bit range keeps the draw unbiased.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

    /// Poisson variate; exact for all means (product method, with halving
    /// into independent summands for large means to avoid underflow).
    long poisson(double mean) {
        if (mean < 0.0 || !std::isfinite(mean))
            throw std::invalid_argument("poisson: mean must be finite and >= 0");
        if (mean == 0.0) return 0;
        long total = 0;
        while (mean > 60.0) {
            // Poisson(m) == Poisson(m/2) + Poisson(m/2) with independent parts.
            total += poisson_small(mean / 2);
            mean /= 2;
        }
        return total + poisson_small(mean);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long poisson_small(double mean) {
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t stream_;
};

} // namespace srg
