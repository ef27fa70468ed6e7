#include "pdc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdc/counting.hpp"

namespace pdc {

// ---------------------------------------------------------------------------
// enumeration oracle
// ---------------------------------------------------------------------------

EnumerationIndex::EnumerationIndex(std::uint64_t n) : n_(n) {
    if (n > 60) throw std::length_error("EnumerationIndex: n > 60 is impractical");
    std::vector<std::uint64_t> current;
    // descending-first recursion emits decreasing lexicographic order
    std::function<void(std::uint64_t, std::uint64_t)> gen = [&](std::uint64_t m,
                                                                std::uint64_t bound) {
        if (m == 0) {
            Partition p;
            p.n = n_;
            p.parts = current;
            index_.emplace(p.parts, list_.size());
            list_.push_back(std::move(p));
            return;
        }
        for (std::uint64_t i = std::min(bound, m); i >= 1; --i) {
            current.push_back(i);
            gen(m - i, i);
            current.pop_back();
        }
    };
    gen(n, n);
}

bool EnumerationIndex::contains(const Partition& p) const {
    return index_.find(p.parts) != index_.end();
}

std::size_t EnumerationIndex::index_of(const Partition& p) const {
    auto it = index_.find(p.parts);
    if (it == index_.end()) throw std::out_of_range("EnumerationIndex: partition not found");
    return it->second;
}

EnumerationIndex enumerate_partitions(std::uint64_t n) { return EnumerationIndex(n); }

// ---------------------------------------------------------------------------
// chi-square machinery
// ---------------------------------------------------------------------------

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // series for P(a,x); Q = 1 - P
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // continued fraction for Q (modified Lentz)
    double b = x + 1.0 - a;
    double c = 1e300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& counts) {
    const std::uint64_t cells = counts.size();
    if (cells < 2) throw std::invalid_argument("chi_square_uniform: need at least 2 cells");
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total < 5 * cells)
        throw std::invalid_argument("chi_square_uniform: undersampled (need >= 5 per cell)");
    const double expected = static_cast<double>(total) / static_cast<double>(cells);
    double stat = 0.0;
    for (std::uint64_t c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.dof = cells - 1;
    r.p_value = gamma_q(static_cast<double>(r.dof) / 2.0, stat / 2.0);
    return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("chi_square_two_sample: size mismatch");
    // pool adjacent cells until each pooled cell has >= 10 combined counts
    std::vector<std::pair<double, double>> cells;
    double ca = 0.0, cb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca += static_cast<double>(a[i]);
        cb += static_cast<double>(b[i]);
        if (ca + cb >= 10.0) {
            cells.emplace_back(ca, cb);
            ca = cb = 0.0;
        }
    }
    if (ca + cb > 0.0) {
        if (cells.empty())
            cells.emplace_back(ca, cb);
        else {
            cells.back().first += ca;
            cells.back().second += cb;
        }
    }
    if (cells.size() < 2) throw std::invalid_argument("chi_square_two_sample: too few occupied cells");
    double na = 0.0, nb = 0.0;
    for (const auto& [xa, xb] : cells) {
        na += xa;
        nb += xb;
    }
    const double ra = std::sqrt(nb / na);
    const double rb = std::sqrt(na / nb);
    double stat = 0.0;
    for (const auto& [xa, xb] : cells) {
        double num = ra * xa - rb * xb;
        stat += num * num / (xa + xb);
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.dof = cells.size() - 1;
    r.p_value = gamma_q(static_cast<double>(r.dof) / 2.0, stat / 2.0);
    return r;
}

bool majority_over_seeds(std::uint64_t seed, const std::function<bool(std::uint64_t)>& check) {
    int passes = 0;
    for (std::uint64_t s = seed; s < seed + 3; ++s)
        if (check(s)) ++passes;
    return passes >= 2;
}

// ---------------------------------------------------------------------------
// acceptance-cost measurement
// ---------------------------------------------------------------------------

CostReport measure_cost(const std::string& method, std::uint64_t n, std::uint64_t trials,
                        std::uint64_t seed, const MeasureOptions& opts) {
    if (trials < 100) throw std::invalid_argument("measure_cost: need trials >= 100");
    CostReport report;
    report.method = method;
    report.n = n;
    report.trials = trials;
    report.k = opts.k;
    report.b = opts.b;

    const bool recursive = method == "recursive" || method == "recursive-noparity";
    if ((method == "kcore" || method == "kcore-lucky") && !opts.k)
        throw std::invalid_argument("measure_cost: " + method + " needs the k option");
    SamplerOptions sampler = opts.sampler;
    if (method == "recursive-noparity") sampler.parity_trick = false;

    double sum_top_proposals = 0.0;
    double sum_draws = 0.0;
    double sum_depth = 0.0;
    struct LevelAcc {
        double target = 0.0, proposals = 0.0, draws = 0.0;
        std::uint64_t runs = 0;
    };
    std::vector<LevelAcc> levels;

    RngStream root(seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream stream = root.substream(t);
        SampleStats stats;
        if (method == "lucky") {
            stats = sample_lucky(n, stream, sampler).second;
        } else if (method == "trivial") {
            stats = sample_pdc_trivial(n, stream, sampler).second;
        } else if (method == "small-large") {
            std::uint64_t b = opts.b.value_or(static_cast<std::uint64_t>(
                std::sqrt(static_cast<double>(n))));
            stats = sample_pdc_small_large(n, b, stream, sampler).second;
        } else if (recursive) {
            stats = sample_pdc_recursive(n, stream, opts.base_cutoff, sampler).second;
        } else if (method == "kcore") {
            stats = sample_kcore(n, opts.k.value(), stream, sampler).second;
        } else if (method == "kcore-lucky") {
            stats = sample_kcore_lucky(n, opts.k.value(), stream).second;
        } else if (method == "setshape") {
            stats = sample_setpartition_shape(n, stream, sampler).second;
        } else if (method == "setshape-lucky") {
            stats = sample_setshape_lucky(n, stream).second;
        } else if (method == "planearray") {
            stats = sample_plane_array(n, stream, sampler).second;
        } else if (method == "planearray-lucky") {
            stats = sample_plane_lucky(n, stream).second;
        } else {
            throw std::invalid_argument("measure_cost: unknown method " + method);
        }

        sum_draws += static_cast<double>(stats.rng.uniform_draws);
        sum_depth += static_cast<double>(stats.recursion_depth);
        if (recursive) {
            sum_top_proposals +=
                stats.per_level.empty() ? 0.0 : static_cast<double>(stats.per_level[0].second);
            if (levels.size() < stats.per_level.size()) levels.resize(stats.per_level.size());
            for (std::size_t l = 0; l < stats.per_level.size(); ++l) {
                levels[l].target += static_cast<double>(stats.per_level[l].first);
                levels[l].proposals += static_cast<double>(stats.per_level[l].second);
                levels[l].draws += static_cast<double>(stats.per_level_draws[l]);
                ++levels[l].runs;
            }
        } else {
            sum_top_proposals += static_cast<double>(stats.proposals);
        }
    }

    const double dt = static_cast<double>(trials);
    report.mean_proposals = sum_top_proposals / dt;
    report.mean_rng_draws = sum_draws / dt;
    report.mean_recursion_depth = sum_depth / dt;
    for (const auto& acc : levels) {
        CostReport::Level lv;
        lv.runs = acc.runs;
        lv.mean_target = acc.target / static_cast<double>(acc.runs);
        lv.mean_proposals = acc.proposals / static_cast<double>(acc.runs);
        lv.mean_draws = acc.draws / static_cast<double>(acc.runs);
        report.per_level.push_back(lv);
    }

    // paper constants the measurements are judged against
    const double dn = static_cast<double>(n);
    if (method == "lucky") {
        report.theory_value = 2.0 * std::pow(6.0, 0.25) * std::pow(dn, 0.75);
    } else if (method == "trivial") {
        report.theory_value = 2.0 * std::pow(dn, 0.25) * std::pow(6.0, 0.75) / 3.14159265358979323846;
    } else if (method == "recursive") {
        report.theory_value = std::sqrt(2.0);
    } else if (method == "recursive-noparity") {
        report.theory_value = std::sqrt(8.0);
    } else if (method == "kcore" && opts.k) {
        report.theory_value = 1.0 / (1.0 - solve_bounded_tilt(n, *opts.k)); // speedup over lucky
    } else if (method == "setshape-lucky") {
        double x = set_partition_tilt(n);
        report.theory_value = std::sqrt(2.0 * 3.14159265358979323846 * dn * (x + 1.0));
    } else if (method == "planearray") {
        report.theory_value = 1.0 / (1.0 - plane_tilt(n)); // speedup over lucky
    } else if (method == "small-large") {
        std::uint64_t b = opts.b.value_or(static_cast<std::uint64_t>(std::sqrt(dn)));
        auto ctx = small_large_context(n, b);
        double log_c = hit_probability(n, ctx->gc.x, kDefaultExactCutoff, n) - ctx->dist.log_max_q;
        report.theory_value = std::exp(-log_c); // acceptance cost 1/C
    }
    if (report.theory_value && *report.theory_value > 0.0)
        report.ratio = report.mean_proposals / *report.theory_value;
    return report;
}

} // namespace pdc
