#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdc/samplers.hpp"
#include "pdc/variants.hpp"

namespace pdc {

/// Complete ordered list of the p_n partitions of n (decreasing
/// lexicographic by parts), with O(1) lookup from partition to cell.
class EnumerationIndex {
public:
    explicit EnumerationIndex(std::uint64_t n);

    std::uint64_t n() const { return n_; }
    std::size_t size() const { return list_.size(); }
    const Partition& at(std::size_t idx) const { return list_.at(idx); }
    const std::vector<Partition>& list() const { return list_; }

    bool contains(const Partition& p) const;
    std::size_t index_of(const Partition& p) const; // throws std::out_of_range

private:
    struct VecHash {
        std::size_t operator()(const std::vector<std::uint64_t>& v) const {
            std::size_t h = 1469598103934665603ull;
            for (std::uint64_t x : v) {
                h ^= RngStream::mix64(x + 0x9E3779B97F4A7C15ull);
                h *= 1099511628211ull;
            }
            return h;
        }
    };
    std::uint64_t n_;
    std::vector<Partition> list_;
    std::unordered_map<std::vector<std::uint64_t>, std::size_t, VecHash> index_;
};

/// n <= 60 (cell counts beyond that are impractical for frequency tests).
EnumerationIndex enumerate_partitions(std::uint64_t n);

/// Regularized upper incomplete gamma Q(a, x), the chi-square upper tail.
double gamma_q(double a, double x);

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::uint64_t dof = 0;
};

/// Pearson statistic against the uniform null over counts.size() cells.
/// Requires sum(counts) >= 5 * cells.
ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& counts);

/// Two-sample chi-square for equality of two discrete laws; sparse cells
/// are pooled until every cell holds at least 10 combined observations.
ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b);

/// Runs check on seeds seed, seed+1, seed+2; true when at least two pass.
bool majority_over_seeds(std::uint64_t seed, const std::function<bool(std::uint64_t)>& check);

struct CostReport {
    std::string method;
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    double mean_proposals = 0.0; // for the recursive samplers: top level
    double mean_rng_draws = 0.0;
    double mean_recursion_depth = 0.0;
    std::optional<double> theory_value;
    std::optional<double> ratio; // mean_proposals / theory_value

    struct Level {
        double mean_target = 0.0;
        double mean_proposals = 0.0;
        double mean_draws = 0.0;
        std::uint64_t runs = 0;
    };
    std::vector<Level> per_level;

    std::optional<std::uint64_t> k; // k-core bound, echoed
    std::optional<std::uint64_t> b; // split point, echoed
};

struct MeasureOptions {
    std::optional<std::uint64_t> k;
    std::optional<std::uint64_t> b;
    std::uint64_t base_cutoff = 489;
    SamplerOptions sampler{};
};

/// Runs a registered method `trials` times on substreams of seed and
/// aggregates its SampleStats, attaching the theoretical constant the method is
/// judged against. Methods: lucky, trivial, small-large, recursive,
/// recursive-noparity, kcore, kcore-lucky, setshape, setshape-lucky,
/// planearray, planearray-lucky.
CostReport measure_cost(const std::string& method, std::uint64_t n, std::uint64_t trials,
                        std::uint64_t seed, const MeasureOptions& opts = {});

} // namespace pdc
