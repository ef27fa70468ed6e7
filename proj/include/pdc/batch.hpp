#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pdc/samplers.hpp"

namespace pdc {

/// Tilt aimed at a phase-B residual: the y maximizing P_y(T_B = target),
/// i.e. the root of target = sum_{i=1}^{b} i y^i/(1-y^i). A zero target
/// returns a nominal tiny tilt (the all-zero proposal then has probability
/// close to one).
double roaming_tilt(std::uint64_t b, std::uint64_t target);

/// Multiset of outstanding phase-A demands, keyed by color. Matching pops
/// the earliest-accepted outstanding slot of the color, so the pairing
/// depends only on information available before the proposal.
class DemandMultiset {
public:
    void insert(std::uint64_t color, std::uint64_t slot);
    std::optional<std::uint64_t> match(std::uint64_t color);
    std::uint64_t outstanding() const { return total_; }
    /// Most frequent outstanding color, ties broken toward the smallest.
    std::optional<std::uint64_t> most_frequent() const;

private:
    struct ByCount {
        bool operator()(const std::pair<std::uint64_t, std::uint64_t>& a,
                        const std::pair<std::uint64_t, std::uint64_t>& b) const {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        }
    };
    std::map<std::uint64_t, std::deque<std::uint64_t>> slots_; // color -> FIFO of slots
    std::set<std::pair<std::uint64_t, std::uint64_t>, ByCount> by_count_; // (count, color)
    std::uint64_t total_ = 0;
};

struct BatchOptions {
    bool roaming = true;      // greedy roaming tilt; false pins phase B at x(n)
    std::uint64_t v_max = 0;  // demands that may be left deliberately missing
    SamplerOptions sampler{};
};

/// Result of a mix-and-match batch. Slot order is phase-A acceptance
/// order (labeling by B-discovery order would not be an i.i.d. sample;
/// discovery_order is kept so that bias is observable).
struct BatchResult {
    std::vector<std::optional<Partition>> samples;
    std::uint64_t missing_count = 0;
    SampleStats phase_a;
    SampleStats phase_b;
    std::vector<std::uint64_t> discovery_order;
};

/// Serve m small-vs-large demands with one stream of phase-B proposals,
/// matched by color. With v_max = 0 the filled slots are an exact i.i.d.
/// uniform sample of size m.
BatchResult batch_mix_match(std::uint64_t n, std::uint64_t b, std::uint64_t m, RngStream& rng,
                            const BatchOptions& opts = {});

/// Dominance order: every prefix sum of lambda at least that of mu.
/// Both partitions must have the same weight.
bool dominates(const Partition& lambda, const Partition& mu);

/// z with P(N(0,1) > z) = tail, for the interval below.
double normal_upper_quantile(double tail);

struct DominanceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double p_hat = 0.0;  // (K + V/2)/m, the plug-in used inside the radical
    double z = 0.0;
};

/// Worst-case confidence interval for a proportion estimated from m
/// pre-assigned pairs of which V are missing and K of the completed ones
/// scored 1: [K/m - z r, (K+V)/m + z r] with r = sqrt(p_hat(1-p_hat)/m).
/// Coverage is at least 1 - alpha; the center is biased (the missing
/// mechanism is not observable), so only the endpoints are meaningful.
DominanceInterval dominance_interval(std::uint64_t K, std::uint64_t m, std::uint64_t V,
                                     double alpha);

struct EstimatorReport {
    std::uint64_t matches = 0;     // W
    double total_score = 0.0;      // G
    double g_bar_pairs = 0.0;      // G/(m1 m2), unbiased for p E g(S)
    double g_bar_matched = 0.0;    // G/W, biased but consistent for E g(S)
    bool matched_defined = false;  // false iff W = 0
};

/// Opportunistic take-all-you-can-get estimator: m1 unconditioned A
/// proposals against m2 unconditioned B proposals, scoring every matching
/// pair.
EstimatorReport opportunistic_estimate(std::uint64_t n, std::uint64_t b, std::uint64_t m1,
                                       std::uint64_t m2,
                                       const std::function<double(const Partition&)>& g,
                                       RngStream& rng);

} // namespace pdc
