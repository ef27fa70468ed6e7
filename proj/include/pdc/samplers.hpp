#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "pdc/counting.hpp"
#include "pdc/ensemble.hpp"
#include "pdc/highprec.hpp"
#include "pdc/rng.hpp"

namespace pdc {

/// A validated partition: nonincreasing positive parts summing to n.
struct Partition {
    std::vector<std::uint64_t> parts;
    std::uint64_t n = 0;

    static Partition from_multiplicities(const MultiplicityVector& v);
    MultiplicityVector to_multiplicities() const;
    void validate() const;

    bool operator==(const Partition& o) const { return n == o.n && parts == o.parts; }
};

/// Per-run accounting: proposals and acceptances of phase A, RNG budget,
/// recursion depth, and one (target, proposals) record per recursion level.
struct SampleStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    RngBudget rng;
    std::uint64_t recursion_depth = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> per_level; // (target, proposals)
    std::vector<std::uint64_t> per_level_draws;
    std::uint64_t coin_escalations = 0;

    void merge(const SampleStats& o) {
        proposals += o.proposals;
        accepted += o.accepted;
        rng += o.rng;
        coin_escalations += o.coin_escalations;
    }
};

/// Acceptance coin 1(U < t). The threshold is evaluated in doubles; when
/// the drawn uniform falls within the near-tie window of t, the decision
/// escalates to a 128-bit re-evaluation so that double rounding can never
/// flip an accept/reject decision silently.
struct AcceptanceCoin {
    double near_tie_window = 1e-12;
    bool escalate = true;

    bool decide(double threshold, const std::function<Real128()>& refine, RngStream& rng,
                SampleStats& stats) const;
};

enum class ProposalKind { naive, poisson, largest_index };

struct SamplerOptions {
    ProposalKind engine = ProposalKind::poisson;
    AcceptanceCoin coin{};
    bool roaming_phase_b = true; // small-vs-large phase B tilt aimed at the residual
    bool parity_trick = true;    // recursive sampler: move eps_1 to the B side
};

/// Exactly uniform sampling by largest part first, using big-integer
/// thresholds P(X_1 <= i) = p(<=i, m)/p(<=bound, m). The table must be a
/// full grid covering parts and weights up to n.
Partition sample_table(std::uint64_t n, const CountTable& table, RngStream& rng);

/// Process-wide cache of full-grid tables (immutable, shared).
std::shared_ptr<const CountTable> shared_count_table(std::uint64_t n);

/// Waiting-to-get-lucky: propose the whole multiplicity vector until its
/// weighted sum hits n. Expected proposals ~ 2 6^(1/4) n^(3/4).
std::pair<Partition, SampleStats> sample_lucky(std::uint64_t n, RngStream& rng,
                                               const SamplerOptions& opts = {});

/// Small-vs-large PDC: A = (Z_{b+1},...,Z_n) accepted with probability
/// q_{n-T_A}/max_j q_j, then B = (Z_1,...,Z_b) conditioned on the residual
/// by repeated proposal at the roaming tilt.
std::pair<Partition, SampleStats> sample_pdc_small_large(std::uint64_t n, std::uint64_t b,
                                                         RngStream& rng,
                                                         const SamplerOptions& opts = {});

/// Trivial-second-half PDC (b = 1): A = (Z_2,...,Z_n), acceptance x^(n-T_A),
/// and Z_1 = n - T_A set deterministically. Expected proposals
/// ~ 2 n^(1/4) 6^(3/4) / pi.
std::pair<Partition, SampleStats> sample_pdc_trivial(std::uint64_t n, RngStream& rng,
                                                     const SamplerOptions& opts = {});

/// Recursive PDC through p(z) = d(z) p(z^2): propose the parity bits,
/// accept at cost sqrt(2) per level (sqrt(8) without the parity trick),
/// halve, and recurse with a fresh tilt; the base case is the table method.
std::pair<Partition, SampleStats> sample_pdc_recursive(std::uint64_t n, RngStream& rng,
                                                       std::uint64_t base_cutoff = 489,
                                                       const SamplerOptions& opts = {});

// ---------------------------------------------------------------------------
// Shared phase-A machinery of the small-vs-large split, used by both the
// m = 1 sampler and the mix-and-match batch scheduler.
// ---------------------------------------------------------------------------

struct SmallLargeContext {
    GrandCanonical gc;
    std::uint64_t b = 0;
    SumDistribution dist;
    std::vector<BigCount> part_counts; // p(<=b, j), j = 0..n, for 128-bit refinement
};

std::shared_ptr<const SmallLargeContext> small_large_context(std::uint64_t n, std::uint64_t b);

/// One accepted phase-A value (multiplicities of sizes b+1..n) plus its
/// weighted sum; updates proposal counts and the coin budget in stats.
std::pair<MultiplicityVector, std::uint64_t> small_large_accept_a(const SmallLargeContext& ctx,
                                                                  RngStream& rng,
                                                                  SampleStats& stats,
                                                                  const SamplerOptions& opts);

MultiplicityVector merge_multiplicities(const MultiplicityVector& a, const MultiplicityVector& b);

/// Transpose of the Young diagram: part j of the conjugate counts the
/// parts of p that are >= j.
Partition conjugate(const Partition& p);

} // namespace pdc
