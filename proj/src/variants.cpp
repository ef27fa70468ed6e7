#include "pdc/variants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pdc {

void BoundedPartition::validate() const {
    partition.validate();
    if (!partition.parts.empty() && partition.parts.front() >= part_bound)
        throw std::logic_error("BoundedPartition: part at or above the bound");
}

void SetPartitionShape::validate() const {
    if (weighted_sum(block_sizes) != n) throw std::logic_error("SetPartitionShape: weight mismatch");
}

void PlaneArray::validate() const {
    if (plane_weight(grid) != n) throw std::logic_error("PlaneArray: weight mismatch");
    for (const auto& [i, j, z] : grid.cells) {
        if (z == 0) throw std::logic_error("PlaneArray: stored zero cell");
        if (i >= grid.box || j >= grid.box) throw std::logic_error("PlaneArray: cell outside box");
    }
}

// ---------------------------------------------------------------------------
// k-cores: partitions with all parts < k
// ---------------------------------------------------------------------------

std::pair<BoundedPartition, SampleStats> sample_kcore(std::uint64_t n, std::uint64_t k,
                                                      RngStream& rng,
                                                      const SamplerOptions& opts) {
    if (k < 2) throw std::invalid_argument("sample_kcore: k must be >= 2");
    if (n < 1) throw std::invalid_argument("sample_kcore: n must be >= 1");
    SampleStats stats;
    const std::uint64_t before = rng.draws();
    BoundedPartition out;
    out.part_bound = k;

    if (k == 2) {
        // A is empty; the single proposal is forced to the all-ones partition
        stats.proposals = 1;
        stats.accepted = 1;
        MultiplicityVector v;
        v.support = n;
        v.add(1, n);
        out.partition = Partition::from_multiplicities(v);
        return {out, stats};
    }

    const double x = solve_bounded_tilt(n, k);
    const double log_x = std::log(x);
    GeometricProposal engine({n, x}, 2, k - 1);
    for (;;) {
        ++stats.proposals;
        MultiplicityVector v = engine.propose(rng);
        std::uint64_t ta = weighted_sum(v);
        if (ta > n) continue;
        const std::uint64_t z1 = n - ta;
        double t = std::exp(static_cast<double>(z1) * log_x);
        auto refine = [x, z1]() { return pow_ui(Real128(x), z1); };
        if (opts.coin.decide(t, refine, rng, stats)) {
            ++stats.accepted;
            v.add(1, z1);
            v.normalize();
            out.partition = Partition::from_multiplicities(v);
            stats.rng.uniform_draws = rng.draws() - before;
            return {out, stats};
        }
    }
}

std::pair<BoundedPartition, SampleStats> sample_kcore_lucky(std::uint64_t n, std::uint64_t k,
                                                            RngStream& rng) {
    if (k < 2) throw std::invalid_argument("sample_kcore_lucky: k must be >= 2");
    SampleStats stats;
    const std::uint64_t before = rng.draws();
    const double x = solve_bounded_tilt(n, k);
    GeometricProposal engine({n, x}, 1, k - 1);
    for (;;) {
        ++stats.proposals;
        MultiplicityVector v = engine.propose(rng);
        if (weighted_sum(v) == n) {
            stats.accepted = 1;
            stats.rng.uniform_draws = rng.draws() - before;
            return {BoundedPartition{Partition::from_multiplicities(v), k}, stats};
        }
    }
}

// ---------------------------------------------------------------------------
// set-partition shapes
// ---------------------------------------------------------------------------

namespace {

double poisson_log_pmf(std::uint64_t z, double log_rate, double rate) {
    return static_cast<double>(z) * log_rate - rate - std::lgamma(static_cast<double>(z) + 1.0);
}

} // namespace

std::pair<SetPartitionShape, SampleStats> sample_setpartition_shape(std::uint64_t n,
                                                                    RngStream& rng,
                                                                    const SamplerOptions& opts) {
    if (n < 2) throw std::invalid_argument("sample_setpartition_shape: n must be >= 2");
    SampleStats stats;
    const std::uint64_t before = rng.draws();
    const double x = set_partition_tilt(n);
    const double log_x = std::log(x);
    const std::uint64_t j = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(x));
    const double rate_j =
        std::exp(static_cast<double>(j) * log_x - std::lgamma(static_cast<double>(j) + 1.0));
    const double log_rate_j = std::log(rate_j);
    // Poisson mode: floor of the rate (at integer rates both neighbors tie)
    const std::uint64_t mode = static_cast<std::uint64_t>(rate_j);
    const double log_pmf_mode = poisson_log_pmf(mode, log_rate_j, rate_j);

    for (;;) {
        ++stats.proposals;
        auto [v, budget] = propose_set_partition(n, x, rng, j);
        std::uint64_t ta = weighted_sum(v);
        if (ta > n) continue;
        if ((n - ta) % j != 0) continue; // residual must be a multiple of j
        const std::uint64_t zj = (n - ta) / j;
        double t = std::exp(poisson_log_pmf(zj, log_rate_j, rate_j) - log_pmf_mode);
        if (t > 1.0) {
            if (t > 1.0 + 1e-9)
                throw std::logic_error("sample_setpartition_shape: threshold above the mode");
            t = 1.0;
        }
        auto refine = [x, j, zj, mode]() {
            Real128 lx = log(Real128(x));
            Real128 lgj = Real128(0.0);
            for (std::uint64_t i = 2; i <= j; ++i) lgj = lgj + log(Real128(i));
            Real128 lr = Real128(j) * lx - lgj; // ln lambda_j
            auto lpmf = [&](std::uint64_t z) {
                Real128 lg = Real128(0.0);
                for (std::uint64_t i = 2; i <= z; ++i) lg = lg + log(Real128(i));
                return Real128(z) * lr - exp(lr) - lg;
            };
            return exp(lpmf(zj) - lpmf(mode));
        };
        if (opts.coin.decide(t, refine, rng, stats)) {
            ++stats.accepted;
            v.add(j, zj);
            v.normalize();
            stats.rng.uniform_draws = rng.draws() - before;
            return {SetPartitionShape{std::move(v), n}, stats};
        }
    }
}

std::pair<SetPartitionShape, SampleStats> sample_setshape_lucky(std::uint64_t n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_setshape_lucky: n must be >= 1");
    SampleStats stats;
    const std::uint64_t before = rng.draws();
    const double x = set_partition_tilt(n);
    for (;;) {
        ++stats.proposals;
        auto [v, budget] = propose_set_partition(n, x, rng);
        if (weighted_sum(v) == n) {
            stats.accepted = 1;
            stats.rng.uniform_draws = rng.draws() - before;
            return {SetPartitionShape{std::move(v), n}, stats};
        }
    }
}

// ---------------------------------------------------------------------------
// plane-partition arrays
// ---------------------------------------------------------------------------

namespace {

const PlaneProposal& shared_plane_engine(std::uint64_t n, bool exclude_origin) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, bool>, std::unique_ptr<const PlaneProposal>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, exclude_origin);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<const PlaneProposal>(n, exclude_origin)).first;
    return *it->second;
}

} // namespace

std::pair<PlaneArray, SampleStats> sample_plane_array(std::uint64_t n, RngStream& rng,
                                                      const SamplerOptions& opts) {
    if (n < 1) throw std::invalid_argument("sample_plane_array: n must be >= 1");
    SampleStats stats;
    const std::uint64_t before = rng.draws();
    const PlaneProposal& engine = shared_plane_engine(n, /*exclude_origin=*/true);
    const double log_x = std::log(engine.x());
    for (;;) {
        ++stats.proposals;
        PlaneGrid g = engine.propose(rng);
        std::uint64_t ta = plane_weight(g);
        if (ta > n) continue;
        const std::uint64_t z00 = n - ta;
        double t = std::exp(static_cast<double>(z00) * log_x);
        double x = engine.x();
        auto refine = [x, z00]() { return pow_ui(Real128(x), z00); };
        if (opts.coin.decide(t, refine, rng, stats)) {
            ++stats.accepted;
            if (z00 > 0) g.cells.insert(g.cells.begin(), {0, 0, z00});
            stats.rng.uniform_draws = rng.draws() - before;
            PlaneArray out{std::move(g), n};
            out.validate();
            return {out, stats};
        }
    }
}

std::pair<PlaneArray, SampleStats> sample_plane_lucky(std::uint64_t n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample_plane_lucky: n must be >= 1");
    SampleStats stats;
    const std::uint64_t before = rng.draws();
    const PlaneProposal& engine = shared_plane_engine(n, /*exclude_origin=*/false);
    for (;;) {
        ++stats.proposals;
        PlaneGrid g = engine.propose(rng);
        if (plane_weight(g) == n) {
            stats.accepted = 1;
            stats.rng.uniform_draws = rng.draws() - before;
            return {PlaneArray{std::move(g), n}, stats};
        }
    }
}

} // namespace pdc
