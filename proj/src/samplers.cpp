#include "pdc/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "pdc/batch.hpp"

namespace pdc {

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

Partition Partition::from_multiplicities(const MultiplicityVector& v) {
    Partition p;
    p.n = weighted_sum(v);
    std::uint64_t total = 0;
    for (const auto& [i, z] : v.counts) total += z;
    p.parts.reserve(total);
    for (auto it = v.counts.rbegin(); it != v.counts.rend(); ++it)
        for (std::uint64_t r = 0; r < it->second; ++r) p.parts.push_back(it->first);
    return p;
}

MultiplicityVector Partition::to_multiplicities() const {
    MultiplicityVector v;
    v.support = n;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!v.counts.empty() && v.counts.back().first == *it)
            ++v.counts.back().second;
        else
            v.counts.emplace_back(*it, 1);
    }
    return v;
}

void Partition::validate() const {
    unsigned __int128 acc = 0;
    for (std::size_t t = 0; t < parts.size(); ++t) {
        if (parts[t] == 0) throw std::logic_error("Partition: zero part");
        if (t > 0 && parts[t] > parts[t - 1]) throw std::logic_error("Partition: parts not nonincreasing");
        acc += parts[t];
    }
    if (acc != static_cast<unsigned __int128>(n)) throw std::logic_error("Partition: weight mismatch");
}

Partition conjugate(const Partition& p) {
    Partition out;
    out.n = p.n;
    if (p.parts.empty()) return out;
    out.parts.reserve(p.parts.front());
    for (std::uint64_t j = 1; j <= p.parts.front(); ++j) {
        std::uint64_t count = 0;
        for (std::uint64_t part : p.parts) {
            if (part < j) break;
            ++count;
        }
        out.parts.push_back(count);
    }
    return out;
}

MultiplicityVector merge_multiplicities(const MultiplicityVector& a, const MultiplicityVector& b) {
    MultiplicityVector out;
    out.support = std::max(a.support, b.support);
    out.counts.reserve(a.counts.size() + b.counts.size());
    out.counts.insert(out.counts.end(), a.counts.begin(), a.counts.end());
    out.counts.insert(out.counts.end(), b.counts.begin(), b.counts.end());
    out.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// acceptance coin
// ---------------------------------------------------------------------------

bool AcceptanceCoin::decide(double threshold, const std::function<Real128()>& refine,
                            RngStream& rng, SampleStats& stats) const {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::logic_error("AcceptanceCoin: threshold outside [0,1]");
    ++stats.rng.acceptance_coins;
    double u = rng.next_double();
    if (escalate && refine && std::fabs(u - threshold) < near_tie_window) {
        ++stats.coin_escalations;
        return refine().cmp(u) > 0;
    }
    return u < threshold;
}

// ---------------------------------------------------------------------------
// shared caches (all cached objects are immutable once built)
// ---------------------------------------------------------------------------

std::shared_ptr<const CountTable> shared_count_table(std::uint64_t n) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::shared_ptr<const CountTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<const CountTable>(std::max<std::uint64_t>(n, 1), n);
    cache.emplace(n, table);
    return table;
}

namespace {

const PoissonProposal& shared_poisson_engine(const GrandCanonical& gc, std::uint64_t i_lo,
                                             std::uint64_t i_hi) {
    static std::mutex mu;
    static std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>,
                    std::unique_ptr<const PoissonProposal>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(gc.n, i_lo, i_hi);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<const PoissonProposal>(gc, i_lo, i_hi)).first;
    return *it->second;
}

const LargestIndexProposal& shared_largest_index_engine(const GrandCanonical& gc) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<const LargestIndexProposal>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(gc.n);
    if (it == cache.end())
        it = cache.emplace(gc.n, std::make_unique<const LargestIndexProposal>(gc)).first;
    return *it->second;
}

// One multiplicity-vector proposal over sizes [i_lo, i_hi] with the
// configured engine. The largest-index engine only covers the full range.
MultiplicityVector propose_range(const GrandCanonical& gc, std::uint64_t i_lo, std::uint64_t i_hi,
                                 ProposalKind kind, RngStream& rng) {
    switch (kind) {
        case ProposalKind::naive:
            return GeometricProposal(gc, i_lo, i_hi).propose(rng);
        case ProposalKind::largest_index:
            if (i_lo == 1) return shared_largest_index_engine(gc).propose(rng);
            return GeometricProposal(gc, i_lo, i_hi).propose(rng);
        case ProposalKind::poisson:
        default:
            return shared_poisson_engine(gc, i_lo, i_hi).propose(rng);
    }
}

Partition degenerate(std::uint64_t n) {
    Partition p;
    p.n = n;
    if (n > 0) p.parts.push_back(n); // n == 1 in practice
    return p;
}

} // namespace

// ---------------------------------------------------------------------------
// table method
// ---------------------------------------------------------------------------

namespace {

BigCount uniform_below_big(const BigCount& bound, RngStream& rng) {
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> buf(words);
    mpz_class r;
    for (;;) {
        for (auto& w : buf) w = rng.next_u64();
        if (bits % 64) buf[words - 1] &= ~0ull >> (64 - bits % 64);
        mpz_import(r.get_mpz_t(), words, -1, 8, 0, 0, buf.data());
        if (r < bound) return r;
    }
}

} // namespace

Partition sample_table(std::uint64_t n, const CountTable& table, RngStream& rng) {
    if (table.mode() != CountTable::Mode::full_grid)
        throw std::invalid_argument("sample_table: need a full-grid table");
    if (n > 0 && (table.max_part() < n || table.max_weight() < n))
        throw std::invalid_argument("sample_table: table does not cover n");
    Partition p;
    p.n = n;
    std::uint64_t m = n;
    std::uint64_t bound = n;
    while (m > 0) {
        bound = std::min(bound, m);
        BigCount r = uniform_below_big(table.entries(bound, m), rng);
        // largest part = least i with r < p(<=i, m)
        std::uint64_t lo = 1, hi = bound;
        while (lo < hi) {
            std::uint64_t mid = lo + (hi - lo) / 2;
            if (r < table.entries(mid, m))
                hi = mid;
            else
                lo = mid + 1;
        }
        p.parts.push_back(lo);
        m -= lo;
        bound = lo;
    }
    return p;
}

// ---------------------------------------------------------------------------
// waiting-to-get-lucky
// ---------------------------------------------------------------------------

std::pair<Partition, SampleStats> sample_lucky(std::uint64_t n, RngStream& rng,
                                               const SamplerOptions& opts) {
    SampleStats stats;
    if (n <= 1) {
        stats.accepted = 1;
        return {degenerate(n), stats};
    }
    const GrandCanonical gc = grand_canonical(n);
    const std::uint64_t before = rng.draws();
    for (;;) {
        ++stats.proposals;
        MultiplicityVector v = propose_range(gc, 1, n, opts.engine, rng);
        if (weighted_sum(v) == n) {
            stats.accepted = 1;
            stats.rng.uniform_draws = rng.draws() - before;
            return {Partition::from_multiplicities(v), stats};
        }
    }
}

// ---------------------------------------------------------------------------
// small vs large
// ---------------------------------------------------------------------------

std::shared_ptr<const SmallLargeContext> small_large_context(std::uint64_t n, std::uint64_t b) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const SmallLargeContext>>
        cache;
    if (b < 1 || b >= n) throw std::invalid_argument("small_large_context: need 1 <= b < n");
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto ctx = std::make_shared<SmallLargeContext>();
    ctx->gc = grand_canonical(n);
    ctx->b = b;
    CountTable table(b, n, CountTable::Mode::final_row);
    ctx->part_counts.reserve(n + 1);
    for (std::uint64_t j = 0; j <= n; ++j) ctx->part_counts.push_back(table.row(j));
    ctx->dist = sum_distribution(b, n, ctx->gc.x);
    cache.emplace(key, ctx);
    return ctx;
}

std::pair<MultiplicityVector, std::uint64_t> small_large_accept_a(const SmallLargeContext& ctx,
                                                                  RngStream& rng,
                                                                  SampleStats& stats,
                                                                  const SamplerOptions& opts) {
    const std::uint64_t n = ctx.gc.n;
    for (;;) {
        ++stats.proposals;
        MultiplicityVector v = propose_range(ctx.gc, ctx.b + 1, n, opts.engine, rng);
        std::uint64_t ta = weighted_sum(v);
        if (ta > n) continue; // hard rejection
        const std::uint64_t j = n - ta;
        double t = std::exp(ctx.dist.log_q[j] - ctx.dist.log_max_q);
        if (t > 1.0) {
            if (t > 1.0 + 1e-9) throw std::logic_error("small_large_accept_a: threshold above the normalizer");
            t = 1.0;
        }
        auto refine = [&ctx, j]() {
            // the Euler factors cancel: t = (p(<=b,j)/p(<=b,j*)) x^(j-j*)
            const std::uint64_t jm = ctx.dist.argmax;
            Real128 r = Real128(ctx.part_counts[j]) / Real128(ctx.part_counts[jm]);
            Real128 x = tilt_parameter_hp(ctx.gc.n);
            if (j >= jm)
                r = r * pow_ui(x, j - jm);
            else
                r = r / pow_ui(x, jm - j);
            return r;
        };
        if (opts.coin.decide(t, refine, rng, stats)) {
            ++stats.accepted;
            return {std::move(v), ta};
        }
    }
}

std::pair<Partition, SampleStats> sample_pdc_small_large(std::uint64_t n, std::uint64_t b,
                                                         RngStream& rng,
                                                         const SamplerOptions& opts) {
    SampleStats stats;
    if (n <= 1) {
        stats.accepted = 1;
        return {degenerate(n), stats};
    }
    auto ctx = small_large_context(n, b);
    const std::uint64_t before = rng.draws();
    auto [va, ta] = small_large_accept_a(*ctx, rng, stats, opts);

    // phase B: hit the residual with proposals of (Z_1..Z_b); the
    // conditional law given a hit is tilt-invariant, so the roaming tilt
    // only buys a better hit rate.
    const std::uint64_t residual = n - ta;
    double y = opts.roaming_phase_b ? roaming_tilt(b, residual) : ctx->gc.x;
    GeometricProposal engine_b({n, y}, 1, b);
    MultiplicityVector vb;
    for (;;) {
        vb = engine_b.propose(rng);
        if (weighted_sum(vb) == residual) break;
    }
    stats.rng.uniform_draws = rng.draws() - before;
    return {Partition::from_multiplicities(merge_multiplicities(va, vb)), stats};
}

// ---------------------------------------------------------------------------
// trivial second half (b = 1)
// ---------------------------------------------------------------------------

std::pair<Partition, SampleStats> sample_pdc_trivial(std::uint64_t n, RngStream& rng,
                                                     const SamplerOptions& opts) {
    SampleStats stats;
    if (n <= 1) {
        stats.accepted = 1;
        return {degenerate(n), stats};
    }
    const GrandCanonical gc = grand_canonical(n);
    const double log_x = std::log(gc.x);
    const std::uint64_t before = rng.draws();
    for (;;) {
        ++stats.proposals;
        MultiplicityVector v = propose_range(gc, 2, n, opts.engine, rng);
        std::uint64_t ta = weighted_sum(v);
        if (ta > n) continue;
        const std::uint64_t z1 = n - ta;
        double t = std::exp(static_cast<double>(z1) * log_x);
        auto refine = [&gc, z1]() { return pow_ui(tilt_parameter_hp(gc.n), z1); };
        if (opts.coin.decide(t, refine, rng, stats)) {
            ++stats.accepted;
            v.add(1, z1);
            v.normalize();
            stats.rng.uniform_draws = rng.draws() - before;
            return {Partition::from_multiplicities(v), stats};
        }
    }
}

// ---------------------------------------------------------------------------
// recursive PDC via p(z) = d(z) p(z^2)
// ---------------------------------------------------------------------------

namespace {

// Per-level threshold data. With y = x^2, acceptance compares
//   P(eps_1 = forced) P_y(T = n')   against its maximum over feasible
// (parity, m); the Euler product of P_y(T = m) is constant in m and
// cancels, leaving f(m) = ln p_m + m ln y plus the parity factor.
struct LevelContext {
    std::uint64_t n = 0;
    double x = 0.0;
    double log_x = 0.0;
    double log_y = 0.0;
    double log_parity[2] = {0.0, 0.0}; // ln P(eps_1 = 0), ln P(eps_1 = 1)
    double log_m_core = 0.0;           // max_m f(m) over the scan window
    std::uint64_t mode_m = 0;
    bool parity_trick = true;

    double f(std::uint64_t m) const {
        return log_partition_count(m) + static_cast<double>(m) * log_y;
    }

    // numerator exponent for a forced parity bit and residual m
    double log_numerator(std::uint64_t parity, std::uint64_t m) const {
        double v = f(m);
        if (parity_trick) v += log_parity[parity];
        return v;
    }

    double log_normalizer() const {
        return parity_trick ? log_parity[0] + log_m_core : log_m_core;
    }
};

LevelContext make_level_context(std::uint64_t n, bool parity_trick) {
    LevelContext ctx;
    ctx.n = n;
    ctx.parity_trick = parity_trick;
    ctx.x = tilt_parameter(n);
    ctx.log_x = -kTiltC / std::sqrt(static_cast<double>(n));
    ctx.log_y = 2.0 * ctx.log_x;
    ctx.log_parity[0] = -std::log1p(ctx.x);
    ctx.log_parity[1] = ctx.log_x - std::log1p(ctx.x);

    // window around the mode of T under tilt y = x^2
    const double mean = grand_canonical_mean(ctx.x * ctx.x);
    const double sd = std::sqrt(2.0 / kTiltC) * std::pow(std::max(mean, 1.0), 0.75);
    const std::uint64_t half = n / 2;
    std::uint64_t lo = (mean > 8.0 * sd) ? static_cast<std::uint64_t>(mean - 8.0 * sd) : 0;
    std::uint64_t hi = std::min<double>(static_cast<double>(half), mean + 8.0 * sd);
    if (hi < lo) hi = lo;

    if (hi - lo <= 65536) {
        ctx.mode_m = lo;
        ctx.log_m_core = ctx.f(lo);
        for (std::uint64_t m = lo + 1; m <= hi; ++m) {
            double v = ctx.f(m);
            if (v > ctx.log_m_core) {
                ctx.log_m_core = v;
                ctx.mode_m = m;
            }
        }
    } else {
        // f is strictly concave here (hr1 region), so integer ternary search
        std::uint64_t a = lo, b = hi;
        while (b - a > 2) {
            std::uint64_t m1 = a + (b - a) / 3;
            std::uint64_t m2 = b - (b - a) / 3;
            if (ctx.f(m1) < ctx.f(m2))
                a = m1 + 1;
            else
                b = m2;
        }
        ctx.mode_m = a;
        ctx.log_m_core = ctx.f(a);
        for (std::uint64_t m = a + 1; m <= b; ++m) {
            double v = ctx.f(m);
            if (v > ctx.log_m_core) {
                ctx.log_m_core = v;
                ctx.mode_m = m;
            }
        }
    }
    return ctx;
}

// 128-bit re-evaluation of the level threshold for near-tie coins.
Real128 refine_level_threshold(const LevelContext& ctx, std::uint64_t parity, std::uint64_t m) {
    Real128 c = Real128::pi() / sqrt(Real128(std::uint64_t(6)));
    Real128 log_x = -(c / sqrt(Real128(ctx.n)));
    Real128 log_y = Real128(2.0) * log_x;
    Real128 x = exp(log_x);
    auto f_hp = [&](std::uint64_t mm) {
        return log_partition_count_hp(mm, kDefaultExactCutoff) + Real128(mm) * log_y;
    };
    // rescan a small neighborhood of the double-precision mode at 128 bits
    Real128 log_core = f_hp(ctx.mode_m);
    const std::uint64_t span = 4;
    for (std::uint64_t d = 1; d <= span; ++d) {
        if (ctx.mode_m >= d) {
            Real128 v = f_hp(ctx.mode_m - d);
            if (log_core < v) log_core = v;
        }
        Real128 v = f_hp(ctx.mode_m + d);
        if (log_core < v) log_core = v;
    }
    Real128 log_num = f_hp(m);
    Real128 log_den = log_core;
    if (ctx.parity_trick) {
        Real128 lp0 = -log1p(x);
        log_num = log_num + (parity == 1 ? log_x + lp0 : lp0);
        log_den = log_den + lp0;
    }
    return exp(log_num - log_den);
}

} // namespace

std::pair<Partition, SampleStats> sample_pdc_recursive(std::uint64_t n, RngStream& rng,
                                                       std::uint64_t base_cutoff,
                                                       const SamplerOptions& opts) {
    if (base_cutoff < 1) throw std::invalid_argument("sample_pdc_recursive: base_cutoff must be >= 1");
    SampleStats stats;
    const std::uint64_t before = rng.draws();
    if (n <= 1) {
        stats.accepted = 1;
        return {degenerate(n), stats};
    }

    MultiplicityVector assembled;
    assembled.support = n;
    std::uint64_t multiplier = 1;
    std::uint64_t target = n;

    while (target > base_cutoff) {
        LevelContext ctx = make_level_context(target, opts.parity_trick);
        GrandCanonical gc{target, ctx.x};
        const std::uint64_t level_before = rng.draws();
        std::uint64_t level_proposals = 0;
        ParityVector eps;
        std::uint64_t forced = 0;
        std::uint64_t next_target = 0;
        for (;;) {
            ++level_proposals;
            auto [bits, budget] = propose_parity(gc, opts.parity_trick ? 2 : 1, rng);
            std::uint64_t ta = weighted_sum(bits);
            if (ta > target) continue;
            std::uint64_t diff = target - ta;
            std::uint64_t parity = 0;
            std::uint64_t m = 0;
            if (opts.parity_trick) {
                parity = diff & 1;
                m = (diff - parity) >> 1;
            } else {
                if (diff & 1) continue; // hard parity rejection
                m = diff >> 1;
            }
            double t = std::exp(ctx.log_numerator(parity, m) - ctx.log_normalizer());
            if (t > 1.0) {
                if (t > 1.0 + 1e-9)
                    throw std::logic_error("sample_pdc_recursive: numerator exceeded the normalizer");
                t = 1.0;
            }
            auto refine = [&ctx, parity, m]() { return refine_level_threshold(ctx, parity, m); };
            if (opts.coin.decide(t, refine, rng, stats)) {
                eps = std::move(bits);
                forced = opts.parity_trick ? parity : 0;
                next_target = m;
                break;
            }
        }
        ++stats.accepted;
        stats.proposals += level_proposals;
        stats.per_level.emplace_back(target, level_proposals);
        stats.per_level_draws.push_back(rng.draws() - level_before);
        for (std::uint64_t i : eps.ones) assembled.add(i, multiplier);
        if (opts.parity_trick && forced) assembled.add(1, multiplier);
        multiplier <<= 1;
        target = next_target;
        ++stats.recursion_depth;
        if (stats.recursion_depth > 64)
            throw std::logic_error("sample_pdc_recursive: depth bound exceeded");
    }

    if (target > 0) {
        auto table = shared_count_table(std::max(base_cutoff, std::uint64_t(1)));
        Partition base = sample_table(target, *table, rng);
        for (const auto& [i, z] : base.to_multiplicities().counts)
            assembled.add(i, z * multiplier);
    }
    assembled.normalize();
    stats.rng.uniform_draws = rng.draws() - before;
    Partition out = Partition::from_multiplicities(assembled);
    if (out.n != n) throw std::logic_error("sample_pdc_recursive: assembled weight mismatch");
    return {out, stats};
}

} // namespace pdc
