#pragma once

#include <cstdint>

namespace pdc {

/// Counters for the two kinds of randomness a sampling run consumes.
/// Uniform draws are 64-bit generator calls; acceptance coins are the
/// accept/reject decisions layered on top of them.
struct RngBudget {
    std::uint64_t uniform_draws = 0;
    std::uint64_t acceptance_coins = 0;

    RngBudget& operator+=(const RngBudget& o) {
        uniform_draws += o.uniform_draws;
        acceptance_coins += o.acceptance_coins;
        return *this;
    }
};

// splitmix64 (Steele/Lea/Flood; Vigna's fixed-increment variant).
// 64 bits of state, full period 2^64, passes BigCrush. Substreams are
// derived by hashing (seed, index), so trial i of a benchmark sees the
// same stream no matter how many workers run or in what order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        ++calls_;
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    /// Uniform on the open interval (0,1); never returns an endpoint.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, bound), bound >= 1.
    std::uint64_t next_below(std::uint64_t bound);

    RngStream substream(std::uint64_t index) const {
        return RngStream(mix64(seed_ ^ mix64(0x9E3779B97F4A7C15ull * (index + 1))));
    }

    std::uint64_t draws() const { return calls_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
    std::uint64_t calls_ = 0;
};

/// Geometric Z with P(Z >= k) = a^k, via inversion from one uniform.
/// Takes ln a (< 0) so callers can pass i*ln(x) without underflow.
std::uint64_t sample_geometric_log(double log_a, RngStream& rng);

/// Exact Poisson sampler: exponential-spacings product for small means,
/// Hormann's PTRS transformed rejection for mean >= 10. No normal
/// approximation anywhere.
std::uint64_t sample_poisson(double mean, RngStream& rng);

} // namespace pdc
