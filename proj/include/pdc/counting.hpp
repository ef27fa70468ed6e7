#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace pdc {

/// Exact partition counts; arbitrary precision, never rounded.
using BigCount = mpz_class;

/// c = pi/sqrt(6), the constant of the Hardy-Ramanujan exponent.
inline constexpr double kTiltC = 1.2825498301618640955;

/// Below this weight, log-probabilities use exact big-integer counts;
/// above it, the one-term Hardy-Ramanujan-Lehmer approximation (whose
/// guarantee starts at n = 489).
inline constexpr std::uint64_t kDefaultExactCutoff = 2000;

/// ln of a positive big integer, accurate to within a few ulp.
double log_big(const BigCount& v);

/// Table of p(<=k, m): partitions of m with every part of size <= k,
/// satisfying p(<=k,m) = p(<=k-1,m) + p(<=k,m-k). Row k = max_part is
/// the unrestricted p_m once max_part >= m.
///
/// Two storage modes behind one interface: the full (k,m) grid needed by
/// the table sampler, or a streamed final row (only p(<= max_part, .))
/// when intermediate rows are not needed, which cuts memory from b*n to n
/// entries. Immutable after construction; safe to share across threads.
class CountTable {
public:
    enum class Mode { full_grid, final_row };

    CountTable(std::uint64_t max_part, std::uint64_t max_weight, Mode mode = Mode::full_grid);

    std::uint64_t max_part() const { return max_part_; }
    std::uint64_t max_weight() const { return max_weight_; }
    Mode mode() const { return mode_; }

    /// p(<=k, m) for 0 <= k <= max_part, 0 <= m <= max_weight.
    /// k = 0 is the empty-parts convention: 1 if m == 0 else 0.
    /// Requires full_grid mode for k < max_part.
    const BigCount& entries(std::uint64_t k, std::uint64_t m) const;

    /// p(<= max_part, m); available in both modes.
    const BigCount& row(std::uint64_t m) const;

    /// Allocation guard, overridable with PDC_TABLE_MAX_BYTES.
    static std::uint64_t memory_cap_bytes();

private:
    std::uint64_t max_part_;
    std::uint64_t max_weight_;
    Mode mode_;
    // full grid: rows_[k-1][m] = p(<=k, m); final row: rows_[0][m]
    std::vector<std::vector<BigCount>> rows_;
    static const BigCount zero_, one_;
};

/// Exact p_n via the recurrence (streamed, O(n) big-int storage).
BigCount partition_count(std::uint64_t n);

/// ln p_n: exact for n <= exact_cutoff, hr1 above. Cached.
double log_partition_count(std::uint64_t n, std::uint64_t exact_cutoff = kDefaultExactCutoff);

/// ln hr1(n) for Lehmer's single Hardy-Ramanujan term
///   hr1(n) = exp(y)/(4 sqrt(3) (n - 1/24)) * (1 - 1/y),  y = 2c sqrt(n - 1/24).
/// Evaluated in log space; no overflow for n up to 1e18. Relative accuracy
/// of ln p_n is below 1e-16 for all n >= 489.
double hr1_log(std::uint64_t n);

/// sum_{i=1}^{max_part} ln(1 - x^i); max_part = 0 means the infinite
/// product. Truncated once x^i < 2^-75 with the analytic tail estimate
/// -x^(I+1)/(1-x) folded in (the full tail is bounded by -2 x^(I+1)/(1-x)).
double log_euler_factor(double x, std::uint64_t max_part = 0);

/// Distribution of T_B = sum_{i=1}^{b} i Z_i under independent geometric
/// multiplicities with ratio x^i, truncated at weight n:
///   q_j = p(<=b, j) x^j prod_{i=1}^{b} (1 - x^i).
struct SumDistribution {
    std::uint64_t b = 0;
    std::uint64_t n = 0;
    double x = 0.0;
    std::vector<double> q;     // q_j, j = 0..n
    std::vector<double> log_q; // ln q_j (may be -inf only if q_j underflows; counts are positive)
    std::uint64_t argmax = 0;  // argmax_j q_j
    double max_q = 0.0;
    double log_max_q = 0.0;
};

SumDistribution sum_distribution(std::uint64_t b, std::uint64_t n, double x);

/// ln P_x(T = n) = ln p_n + n ln x + sum_i ln(1 - x^i), with T the weighted
/// sum of the grand-canonical multiplicities. max_part truncates the Euler
/// product to parts <= max_part (0 = unbounded); when nonzero it must be
/// >= n so that p_n still counts every conditioned outcome.
double hit_probability(std::uint64_t n, double x,
                       std::uint64_t exact_cutoff = kDefaultExactCutoff,
                       std::uint64_t max_part = 0);

} // namespace pdc
