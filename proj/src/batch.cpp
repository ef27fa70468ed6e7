#include "pdc/batch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace pdc {

double roaming_tilt(std::uint64_t b, std::uint64_t target) {
    if (b < 1) throw std::invalid_argument("roaming_tilt: b must be >= 1");
    if (target == 0) return 1e-6;
    if (b == 1) return static_cast<double>(target) / (static_cast<double>(target) + 1.0);
    return solve_bounded_tilt(target, b + 1, 1e-10);
}

void DemandMultiset::insert(std::uint64_t color, std::uint64_t slot) {
    auto& q = slots_[color];
    if (!q.empty()) by_count_.erase({q.size(), color});
    q.push_back(slot);
    by_count_.insert({q.size(), color});
    ++total_;
}

std::optional<std::uint64_t> DemandMultiset::match(std::uint64_t color) {
    auto it = slots_.find(color);
    if (it == slots_.end() || it->second.empty()) return std::nullopt;
    auto& q = it->second;
    by_count_.erase({q.size(), color});
    std::uint64_t slot = q.front();
    q.pop_front();
    if (!q.empty())
        by_count_.insert({q.size(), color});
    else
        slots_.erase(it);
    --total_;
    return slot;
}

std::optional<std::uint64_t> DemandMultiset::most_frequent() const {
    if (by_count_.empty()) return std::nullopt;
    return by_count_.begin()->second;
}

BatchResult batch_mix_match(std::uint64_t n, std::uint64_t b, std::uint64_t m, RngStream& rng,
                            const BatchOptions& opts) {
    if (m < 1) throw std::invalid_argument("batch_mix_match: m must be >= 1");
    if (opts.v_max > m) throw std::invalid_argument("batch_mix_match: v_max must be <= m");
    auto ctx = small_large_context(n, b);

    BatchResult result;
    result.samples.resize(m);

    // phase A: m accepted large-part vectors; the colors are residuals n - T_A
    std::vector<MultiplicityVector> accepted(m);
    DemandMultiset demands;
    {
        const std::uint64_t before = rng.draws();
        for (std::uint64_t slot = 0; slot < m; ++slot) {
            auto [va, ta] = small_large_accept_a(*ctx, rng, result.phase_a, opts.sampler);
            accepted[slot] = std::move(va);
            demands.insert(n - ta, slot);
        }
        result.phase_a.rng.uniform_draws = rng.draws() - before;
    }

    // phase B: one proposal stream serves the whole demand multiset
    const std::uint64_t needed = m - opts.v_max;
    std::uint64_t matched = 0;
    std::unordered_map<std::uint64_t, double> tilt_cache;
    const std::uint64_t before = rng.draws();
    while (matched < needed) {
        double y = ctx->gc.x;
        if (opts.roaming) {
            std::uint64_t aim = *demands.most_frequent();
            auto it = tilt_cache.find(aim);
            if (it == tilt_cache.end()) it = tilt_cache.emplace(aim, roaming_tilt(b, aim)).first;
            y = it->second;
        }
        ++result.phase_b.proposals;
        MultiplicityVector vb = GeometricProposal({n, y}, 1, b).propose(rng);
        if (auto slot = demands.match(weighted_sum(vb))) {
            result.samples[*slot] =
                Partition::from_multiplicities(merge_multiplicities(accepted[*slot], vb));
            result.discovery_order.push_back(*slot);
            ++matched;
            ++result.phase_b.accepted;
        }
    }
    result.phase_b.rng.uniform_draws = rng.draws() - before;
    result.missing_count = m - matched;
    return result;
}

bool dominates(const Partition& lambda, const Partition& mu) {
    if (lambda.n != mu.n) throw std::invalid_argument("dominates: weights differ");
    unsigned __int128 sl = 0, sm = 0;
    const std::size_t len = std::max(lambda.parts.size(), mu.parts.size());
    for (std::size_t k = 0; k < len; ++k) {
        sl += k < lambda.parts.size() ? lambda.parts[k] : 0;
        sm += k < mu.parts.size() ? mu.parts[k] : 0;
        if (sl < sm) return false;
    }
    return true;
}

double normal_upper_quantile(double tail) {
    if (!(tail > 0.0 && tail < 1.0))
        throw std::invalid_argument("normal_upper_quantile: tail must be in (0,1)");
    // bisection on 0.5 erfc(z/sqrt(2)) = tail; monotone decreasing in z
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double p = 0.5 * std::erfc(mid / 1.4142135623730950488);
        (p > tail ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

DominanceInterval dominance_interval(std::uint64_t K, std::uint64_t m, std::uint64_t V,
                                     double alpha) {
    if (m < 1) throw std::invalid_argument("dominance_interval: m must be >= 1");
    if (V > m) throw std::invalid_argument("dominance_interval: V must be <= m");
    if (K > m - V) throw std::invalid_argument("dominance_interval: K must be <= m - V");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("dominance_interval: alpha must be in (0,1)");
    DominanceInterval out;
    const double dm = static_cast<double>(m);
    out.z = normal_upper_quantile(alpha / 2.0);
    out.p_hat = (static_cast<double>(K) + static_cast<double>(V) / 2.0) / dm;
    const double radius = out.z * std::sqrt(out.p_hat * (1.0 - out.p_hat) / dm);
    out.lo = static_cast<double>(K) / dm - radius;
    out.hi = static_cast<double>(K + V) / dm + radius;
    return out;
}

EstimatorReport opportunistic_estimate(std::uint64_t n, std::uint64_t b, std::uint64_t m1,
                                       std::uint64_t m2,
                                       const std::function<double(const Partition&)>& g,
                                       RngStream& rng) {
    if (m1 < 1 || m2 < 1) throw std::invalid_argument("opportunistic_estimate: m1, m2 must be >= 1");
    if (b < 1 || b >= n) throw std::invalid_argument("opportunistic_estimate: need 1 <= b < n");
    const GrandCanonical gc = grand_canonical(n);

    std::vector<MultiplicityVector> as(m1);
    std::vector<std::uint64_t> ta(m1);
    PoissonProposal engine_a(gc, b + 1, n);
    for (std::uint64_t i = 0; i < m1; ++i) {
        as[i] = engine_a.propose(rng);
        ta[i] = weighted_sum(as[i]);
    }

    std::vector<MultiplicityVector> bs(m2);
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> by_tb;
    GeometricProposal engine_b(gc, 1, b);
    for (std::uint64_t j = 0; j < m2; ++j) {
        bs[j] = engine_b.propose(rng);
        by_tb[weighted_sum(bs[j])].push_back(j);
    }

    EstimatorReport report;
    for (std::uint64_t i = 0; i < m1; ++i) {
        if (ta[i] > n) continue;
        auto it = by_tb.find(n - ta[i]);
        if (it == by_tb.end()) continue;
        for (std::uint64_t j : it->second) {
            ++report.matches;
            report.total_score +=
                g(Partition::from_multiplicities(merge_multiplicities(as[i], bs[j])));
        }
    }
    report.g_bar_pairs =
        report.total_score / (static_cast<double>(m1) * static_cast<double>(m2));
    report.matched_defined = report.matches > 0;
    if (report.matched_defined)
        report.g_bar_matched = report.total_score / static_cast<double>(report.matches);
    return report;
}

} // namespace pdc
