#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pdc/rng.hpp"

namespace pdc {

/// Grand-canonical (Fristedt) ensemble parameters for partitions of n:
/// independent multiplicities Z_i geometric with ratio x^i.
struct GrandCanonical {
    std::uint64_t n = 0;
    double x = 0.0; // tilt, in (0,1)
};

/// x(n) = exp(-c/sqrt(n)), c = pi/sqrt(6); centers E T at n.
double tilt_parameter(std::uint64_t n);

/// E T = sum_{i>=1} i x^i/(1-x^i) under the grand-canonical measure.
double grand_canonical_mean(double x);

inline GrandCanonical grand_canonical(std::uint64_t n) { return {n, tilt_parameter(n)}; }

/// Sparse multiplicity vector: (part size, count) pairs sorted by size,
/// absent sizes meaning zero. The number of distinct sizes of a proposal
/// concentrates near sqrt(n)/c, so dense storage would be wasteful.
struct MultiplicityVector {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
    std::uint64_t support = 0; // declared bound: sizes range over 1..support

    std::uint64_t multiplicity(std::uint64_t i) const;
    void add(std::uint64_t i, std::uint64_t z) {
        if (z != 0) counts.emplace_back(i, z);
    }
    void normalize(); // sort by size, merge duplicates
};

/// T = sum_i i * Z_i in a wide accumulator; no overflow for n <= 2^62.
std::uint64_t weighted_sum(const MultiplicityVector& v);

/// Parity bits of the multiplicities: sorted indices i with epsilon_i = 1.
struct ParityVector {
    std::vector<std::uint64_t> ones;
    std::uint64_t i_from = 1;
    std::uint64_t support = 0;
};

std::uint64_t weighted_sum(const ParityVector& v);

// ---------------------------------------------------------------------------
// Proposal engines. Each is immutable after construction and pure given its
// RNG stream, so one engine may serve many concurrent streams. Index ranges
// [i_lo, i_hi] support the divide-and-conquer splits (A = Z_{b+1..n} etc).
// ---------------------------------------------------------------------------

/// One geometric inversion per index: exactly i_hi - i_lo + 1 uniforms.
class GeometricProposal {
public:
    GeometricProposal(const GrandCanonical& gc, std::uint64_t i_lo, std::uint64_t i_hi);
    MultiplicityVector propose(RngStream& rng) const;
    const GrandCanonical& gc() const { return gc_; }

private:
    GrandCanonical gc_;
    std::uint64_t i_lo_, i_hi_;
    double log_x_;
};

/// Compound-Poisson representation Z_i = sum_j j Y_{ij}, Y_{ij} Poisson of
/// mean x^{ij}/j: one Poisson total plus one placement per arrival, so the
/// expected draw count is s(n) + O(1) = O(sqrt n) instead of n.
/// Cells are enumerated in decreasing-rate order with cached partial sums;
/// the truncated remainder (total rate < 2^-60) is folded into a final
/// zero-effect cell.
class PoissonProposal {
public:
    PoissonProposal(const GrandCanonical& gc, std::uint64_t i_lo, std::uint64_t i_hi);
    MultiplicityVector propose(RngStream& rng) const;

    double total_rate() const { return total_rate_; }
    std::size_t cell_count() const { return cells_.size(); }

private:
    struct Cell {
        std::uint64_t i;
        std::uint64_t j;
    };
    GrandCanonical gc_;
    std::uint64_t i_lo_, i_hi_;
    std::vector<Cell> cells_;     // decreasing rate
    std::vector<double> cum_;     // cumulative rates over cells_
    double total_rate_ = 0.0;     // exact s over the index range, incl. tail
};

/// Ross variant: draw the largest nonzero index L from
/// P(L = j) = x^j prod_{k>j<=n} (1 - x^k), then fill below it.
class LargestIndexProposal {
public:
    explicit LargestIndexProposal(const GrandCanonical& gc);
    MultiplicityVector propose(RngStream& rng) const;
    double cdf_total() const { return cdf_.empty() ? 0.0 : cdf_.back(); }

private:
    GrandCanonical gc_;
    double log_x_;
    std::vector<double> cdf_; // over L = 0..L_max
};

/// s over the compound-Poisson grid: sum_{i_lo<=i<=i_hi, j>=1} x^{ij}/j.
/// i_hi = 0 means unbounded, giving the full s(n).
double poisson_process_rate(double x, std::uint64_t i_lo = 1, std::uint64_t i_hi = 0);

// One-shot proposal helpers (engine construction included). The budget
// is the number of uniforms the call consumed.
std::pair<MultiplicityVector, RngBudget> propose_naive(const GrandCanonical& gc, RngStream& rng);
std::pair<MultiplicityVector, RngBudget> propose_poisson(const GrandCanonical& gc, RngStream& rng);
std::pair<MultiplicityVector, RngBudget> propose_largest_index(const GrandCanonical& gc, RngStream& rng);

/// Independent Bernoulli parity bits for i = i_from..n, P(eps_i = 1) =
/// x^i/(1+x^i). Indices beyond the point where x^i < 2^-75 are left zero
/// (their total one-probability is below 2^-75/(1-x)).
std::pair<ParityVector, RngBudget> propose_parity(const GrandCanonical& gc, std::uint64_t i_from,
                                                  RngStream& rng);

// ---------------------------------------------------------------------------
// Tilts and proposals for the restricted variants.
// ---------------------------------------------------------------------------

/// Root of n = sum_{1<=i<k} i x^i/(1-x^i) in (0,1): the mean-matching tilt
/// for partitions with all parts < k. Bracketed bisection plus Newton
/// polish; relative tolerance tol.
double solve_bounded_tilt(std::uint64_t n, std::uint64_t k, double tol = 1e-12);

/// Positive root of x e^x = n (so x ~ log n), for set-partition shapes.
double set_partition_tilt(std::uint64_t n);

/// Independent Z_i ~ Poisson(x^i/i!) for i = 1..n (truncated where the
/// rates become negligible), x from set_partition_tilt. skip_index leaves
/// out one coordinate, which is the trivial second half of the shape
/// sampler (0 = propose everything).
std::pair<MultiplicityVector, RngBudget> propose_set_partition(std::uint64_t n, double x,
                                                               RngStream& rng,
                                                               std::uint64_t skip_index = 0);

/// Raw plane-partition-array proposal: Z_{i,j} independent geometric with
/// ratio x^{i+j+1} on the box 0 <= i,j < box.
struct PlaneGrid {
    std::uint64_t box = 0;
    double x = 0.0;
    // (i, j, z) with z > 0, sorted by (i, j)
    std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> cells;
};

std::uint64_t plane_weight(const PlaneGrid& g); // sum (i+j+1) Z_{i,j}

/// exp(-(2 zeta(3)/n)^{1/3}), the tilt that centers the array weight at n.
double plane_tilt(std::uint64_t n);

/// Smallest box bound B such that the probability of any nonzero entry
/// outside the simulated region is below 2^-50.
std::uint64_t plane_box(std::uint64_t n);

/// Compound-Poisson engine over the diagonals d = i+j+1 of the array;
/// excluding the origin removes diagonal 1 (exactly the (0,0) cell),
/// which is the trivial second half of the plane-array sampler.
class PlaneProposal {
public:
    PlaneProposal(std::uint64_t n, bool exclude_origin);
    PlaneGrid propose(RngStream& rng) const;
    double total_rate() const { return total_rate_; }
    std::uint64_t box() const { return box_; }
    double x() const { return x_; }

private:
    std::uint64_t n_;
    std::uint64_t box_;
    double x_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells_; // (d, m), decreasing rate
    std::vector<double> cum_;
    double total_rate_ = 0.0;
};

std::pair<PlaneGrid, RngBudget> propose_plane_array(std::uint64_t n, RngStream& rng);

} // namespace pdc
