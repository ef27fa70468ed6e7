#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pdc/batch.hpp"
#include "pdc/verify.hpp"

using namespace pdc;

TEST_CASE("roaming tilt") {
    // b = 1 closed form: target = y/(1-y)
    CHECK(roaming_tilt(1, 5) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    // plug-back residual at (b, target) = (50, 500)
    double y = roaming_tilt(50, 500);
    double sum = 0;
    for (int i = 1; i <= 50; ++i) sum += i * std::pow(y, i) / (1 - std::pow(y, i));
    CHECK(std::fabs(sum - 500.0) / 500.0 < 1e-8);
    // monotone in the target
    double prev = roaming_tilt(10, 0);
    for (std::uint64_t target : {1ull, 2ull, 5ull, 20ull, 100ull, 1000ull}) {
        double cur = roaming_tilt(10, target);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("demand multiset: FIFO pairing and greedy target") {
    DemandMultiset d;
    d.insert(4, 0);
    d.insert(7, 1);
    d.insert(4, 2);
    CHECK(d.outstanding() == 3);
    CHECK(*d.most_frequent() == 4);
    CHECK(*d.match(4) == 0); // earliest slot of that color
    CHECK(!d.match(5).has_value());
    // now colors 4 and 7 are tied with one slot each; ties prefer smaller
    CHECK(*d.most_frequent() == 4);
    CHECK(*d.match(4) == 2);
    CHECK(*d.most_frequent() == 7);
    CHECK(*d.match(7) == 1);
    CHECK(d.outstanding() == 0);
    CHECK(!d.most_frequent().has_value());
}

TEST_CASE("batch with m = 1 matches the small-vs-large sampler") {
    const std::uint64_t n = 12, b = 3;
    auto idx = enumerate_partitions(n);
    RngStream r1(21), r2(22);
    std::vector<std::uint64_t> ca(idx.size(), 0), cb(idx.size(), 0);
    for (int i = 0; i < 30000; ++i) {
        auto res = batch_mix_match(n, b, 1, r1);
        REQUIRE(res.missing_count == 0);
        ca[idx.index_of(*res.samples[0])]++;
        cb[idx.index_of(sample_pdc_small_large(n, b, r2).first)]++;
    }
    CHECK(chi_square_two_sample(ca, cb).p_value > 0.001);
}

TEST_CASE("batch pooled and per-slot uniformity at n = 12 with v_max = 0") {
    const std::uint64_t n = 12, b = 3;
    auto idx = enumerate_partitions(n);
    bool ok = majority_over_seeds(300, [&](std::uint64_t seed) {
        RngStream rng(seed);
        std::vector<std::uint64_t> pooled(idx.size(), 0);
        for (int rep = 0; rep < 100; ++rep) {
            auto res = batch_mix_match(n, b, 1000, rng);
            for (const auto& s : res.samples) pooled[idx.index_of(*s)]++;
        }
        return chi_square_uniform(pooled).p_value > 0.001;
    });
    CHECK(ok);

    // slot 0 in ACCEPTANCE order is uniform across repetitions
    RngStream rng(42);
    std::vector<std::uint64_t> slot0(idx.size(), 0);
    for (int rep = 0; rep < 30000; ++rep) {
        auto res = batch_mix_match(n, b, 5, rng);
        slot0[idx.index_of(*res.samples[0])]++;
    }
    CHECK(chi_square_uniform(slot0).p_value > 0.001);
}

TEST_CASE("labeling by B-discovery order is detectably biased (positive control)") {
    const std::uint64_t n = 12, b = 3;
    auto idx = enumerate_partitions(n);
    RngStream rng(51);
    std::vector<std::uint64_t> first(idx.size(), 0);
    for (int rep = 0; rep < 10000; ++rep) {
        auto res = batch_mix_match(n, b, 8, rng);
        first[idx.index_of(*res.samples[res.discovery_order.front()])]++;
    }
    CHECK(chi_square_uniform(first).p_value < 1e-6);
}

TEST_CASE("deliberately missing data: v_max leaves exactly the tail unmet") {
    RngStream rng(61);
    auto res = batch_mix_match(12, 3, 40, rng, {.roaming = true, .v_max = 5});
    CHECK(res.missing_count == 5);
    std::uint64_t present = 0;
    for (const auto& s : res.samples)
        if (s) {
            s->validate();
            ++present;
        }
    CHECK(present == 35);
    CHECK(res.discovery_order.size() == 35);
}

TEST_CASE("coupon-collector advantage of batching at n = 1000") {
    const std::uint64_t n = 1000, b = 31;
    RngStream rng(71);
    double single = 0;
    const int single_runs = 200;
    for (int i = 0; i < single_runs; ++i) single += double(batch_mix_match(n, b, 1, rng).phase_b.proposals);
    single /= single_runs;
    for (int rep = 0; rep < 20; ++rep) {
        auto res = batch_mix_match(n, b, 1000, rng);
        CHECK(double(res.phase_b.proposals) < 1000.0 * single);
    }
}

TEST_CASE("roaming beats the fixed tilt on phase-B proposals") {
    const std::uint64_t n = 1000, b = 31;
    RngStream r1(81), r2(82);
    std::uint64_t roam = 0, fixed = 0;
    for (int rep = 0; rep < 10; ++rep) {
        roam += batch_mix_match(n, b, 200, r1, {.roaming = true}).phase_b.proposals;
        fixed += batch_mix_match(n, b, 200, r2, {.roaming = false}).phase_b.proposals;
    }
    CHECK(roam < fixed);
}

TEST_CASE("dominance order") {
    auto part = [](std::vector<std::uint64_t> parts) {
        Partition p;
        p.parts = std::move(parts);
        p.n = 0;
        for (auto v : p.parts) p.n += v;
        return p;
    };
    CHECK(dominates(part({4}), part({2, 2})));
    CHECK(!dominates(part({2, 2}), part({3, 1})));
    CHECK(dominates(part({3, 1}), part({2, 2})));
    CHECK_THROWS_AS(dominates(part({4}), part({3})), std::invalid_argument);
    auto idx9 = enumerate_partitions(9);
    for (const auto& p : idx9.list()) CHECK(dominates(p, p));
}

TEST_CASE("dominance interval: reductions and edge cases") {
    CHECK(normal_upper_quantile(0.025) == doctest::Approx(1.959963985).epsilon(1e-8));
    // V = 0 recovers the standard interval centered at K/m
    auto iv = dominance_interval(30, 100, 0, 0.05);
    double p = 0.30;
    double r = 1.959963985 * std::sqrt(p * (1 - p) / 100.0);
    CHECK(iv.lo == doctest::Approx(p - r).epsilon(1e-9));
    CHECK(iv.hi == doctest::Approx(p + r).epsilon(1e-9));
    CHECK(0.5 * (iv.lo + iv.hi) == doctest::Approx(p).epsilon(1e-12));
    // V = m is vacuous
    auto vac = dominance_interval(0, 50, 50, 0.05);
    CHECK(vac.lo <= 0.0);
    CHECK(vac.hi >= 1.0);
    CHECK_THROWS_AS(dominance_interval(10, 20, 15, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(dominance_interval(0, 10, 11, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(dominance_interval(0, 10, 0, 0.0), std::invalid_argument);
}

TEST_CASE("dominance interval coverage with missing pairs at n = 12") {
    const std::uint64_t n = 12;
    auto idx = enumerate_partitions(n);
    double pi_true = 0;
    for (const auto& a : idx.list())
        for (const auto& c : idx.list()) pi_true += dominates(a, c) ? 1.0 : 0.0;
    pi_true /= double(idx.size()) * double(idx.size());

    auto table = shared_count_table(n);
    RngStream rng(91);
    const std::uint64_t m = 200, v_missing = 10;
    int covered = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        // pairs are assigned by slot index before any are dropped
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < m - v_missing; ++i)
            hits += dominates(sample_table(n, *table, rng), sample_table(n, *table, rng)) ? 1 : 0;
        auto iv = dominance_interval(hits, m, v_missing, 0.05);
        if (pi_true >= iv.lo && pi_true <= iv.hi) ++covered;
    }
    CHECK(double(covered) / trials >= 0.95);
}

TEST_CASE("opportunistic estimator: score identity, unbiasedness, consistency") {
    const std::uint64_t n = 12, b = 3;
    RngStream rng(101);
    auto one = [](const Partition&) { return 1.0; };
    auto rep = opportunistic_estimate(n, b, 500, 500, one, rng);
    CHECK(rep.total_score == double(rep.matches)); // g == 1 makes G the match count W

    auto idx = enumerate_partitions(n);
    double eg = 0;
    for (const auto& p : idx.list()) eg += (p.parts.front() % 2 == 0) ? 1.0 : 0.0;
    eg /= double(idx.size());
    auto g_even = [](const Partition& p) {
        return (!p.parts.empty() && p.parts.front() % 2 == 0) ? 1.0 : 0.0;
    };
    const double x = tilt_parameter(n);
    const double p_match = std::exp(hit_probability(n, x, kDefaultExactCutoff, n));

    double mean = 0, sq = 0;
    const int runs = 200;
    for (int i = 0; i < runs; ++i) {
        auto r = opportunistic_estimate(n, b, 500, 500, g_even, rng);
        mean += r.g_bar_pairs;
        sq += r.g_bar_pairs * r.g_bar_pairs;
    }
    mean /= runs;
    double se = std::sqrt((sq / runs - mean * mean) / runs);
    CHECK(std::fabs(mean - p_match * eg) < 3 * se);

    double err_prev = 1e9;
    for (std::uint64_t m : {100ull, 1000ull, 10000ull}) {
        double err = 0.0;
        for (int r = 0; r < 5; ++r) {
            auto rep5 = opportunistic_estimate(n, b, m, m, g_even, rng);
            REQUIRE(rep5.matched_defined);
            err += std::fabs(rep5.g_bar_matched - eg);
        }
        err /= 5.0;
        CHECK(err < err_prev);
        err_prev = err;
        if (m == 10000) CHECK(err < 0.02);
    }
}

TEST_CASE("opportunistic estimator flags an empty match set") {
    RngStream rng(111);
    auto one = [](const Partition&) { return 1.0; };
    auto rep = opportunistic_estimate(5000, 70, 1, 1, one, rng);
    CHECK(rep.matches == 0);
    CHECK(!rep.matched_defined);
    CHECK(rep.g_bar_pairs == 0.0);
}
