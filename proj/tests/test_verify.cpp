#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdc/batch.hpp"
#include "pdc/verify.hpp"

using namespace pdc;

namespace {

// Kolmogorov upper tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
double ks_uniform_p_value(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = double(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d = std::max(d, std::fabs((double(i) + 1.0) / n - xs[i]));
        d = std::max(d, std::fabs(xs[i] - double(i) / n));
    }
    double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * ((k & 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        q += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, q));
}

} // namespace

TEST_CASE("enumeration: order, sizes, lookup") {
    auto idx = enumerate_partitions(4);
    REQUIRE(idx.size() == 5);
    CHECK(idx.at(0).parts == std::vector<std::uint64_t>{4});
    CHECK(idx.at(1).parts == std::vector<std::uint64_t>{3, 1});
    CHECK(idx.at(2).parts == std::vector<std::uint64_t>{2, 2});
    CHECK(idx.at(3).parts == std::vector<std::uint64_t>{2, 1, 1});
    CHECK(idx.at(4).parts == std::vector<std::uint64_t>{1, 1, 1, 1});
    for (std::size_t i = 0; i < idx.size(); ++i) CHECK(idx.index_of(idx.at(i)) == i);

    auto empty = enumerate_partitions(0);
    CHECK(empty.size() == 1);
    CHECK(empty.at(0).parts.empty());

    CHECK(enumerate_partitions(12).size() == 77);
    CHECK(enumerate_partitions(12).size() == partition_count(12));
    for (std::uint64_t n = 0; n <= 25; ++n) {
        auto e = enumerate_partitions(n);
        CHECK(e.size() == partition_count(n));
        for (const auto& p : e.list()) p.validate();
    }
    CHECK_THROWS_AS(enumerate_partitions(61), std::length_error);

    Partition bogus;
    bogus.n = 4;
    bogus.parts = {2, 1};
    CHECK(!idx.contains(bogus));
    CHECK_THROWS_AS(idx.index_of(bogus), std::out_of_range);
}

TEST_CASE("chi-square: exact small cases") {
    auto even = chi_square_uniform({50, 50, 50, 50});
    CHECK(even.statistic == doctest::Approx(0.0));
    CHECK(even.p_value == doctest::Approx(1.0));

    auto lump = chi_square_uniform({100, 0});
    CHECK(lump.statistic == doctest::Approx(100.0));
    CHECK(lump.p_value < 1e-20);

    CHECK_THROWS_AS(chi_square_uniform({2, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(chi_square_uniform({7}), std::invalid_argument);
}

TEST_CASE("gamma_q sanity") {
    // Q(1/2, x/2) = erfc(sqrt(x/2)) for 1 dof
    for (double x : {0.1, 1.0, 3.84, 10.0})
        CHECK(gamma_q(0.5, x / 2) == doctest::Approx(std::erfc(std::sqrt(x / 2))).epsilon(1e-10));
    // chi-square with 2 dof: Q = exp(-x/2)
    for (double x : {0.5, 2.0, 9.21}) CHECK(gamma_q(1.0, x / 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-10));
}

TEST_CASE("chi-square p-values are uniform under the null (KS self-test)") {
    RngStream rng(7);
    std::vector<double> ps;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        std::vector<std::uint64_t> counts(77, 0);
        for (int s = 0; s < 100000; ++s) counts[rng.next_below(77)]++;
        ps.push_back(chi_square_uniform(counts).p_value);
    }
    CHECK(ks_uniform_p_value(ps) > 0.01);
}

TEST_CASE("two-sample chi-square: same vs shifted laws") {
    RngStream rng(9);
    auto draw_hist = [&](double shift) {
        std::vector<std::uint64_t> h(40, 0);
        for (int i = 0; i < 50000; ++i) {
            double g = 0;
            for (int k = 0; k < 12; ++k) g += rng.next_double();
            h[std::min<std::uint64_t>(std::uint64_t(std::max(0.0, g + shift)), 39)]++;
        }
        return h;
    };
    auto a = draw_hist(0.0);
    CHECK(chi_square_two_sample(a, draw_hist(0.0)).p_value > 0.001);
    CHECK(chi_square_two_sample(a, draw_hist(0.35)).p_value < 1e-6);
    CHECK_THROWS_AS(chi_square_two_sample({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("oracle closure: every sampler output is in the enumeration") {
    for (std::uint64_t n : {8ull, 12ull, 15ull}) {
        auto idx = enumerate_partitions(n);
        auto table = shared_count_table(n);
        RngStream rng(n * 31 + 1);
        for (int i = 0; i < 2000; ++i) {
            CHECK(idx.contains(sample_table(n, *table, rng)));
            CHECK(idx.contains(sample_lucky(n, rng).first));
            CHECK(idx.contains(sample_pdc_small_large(n, 3, rng).first));
            CHECK(idx.contains(sample_pdc_trivial(n, rng).first));
            CHECK(idx.contains(sample_pdc_recursive(n, rng, 4).first));
        }
    }
}

TEST_CASE("measure_cost: lucky ratio and argument checking") {
    auto report = measure_cost("lucky", 1000, 300, 12345);
    CHECK(report.trials == 300);
    CHECK(*report.theory_value == doctest::Approx(556.6315367).epsilon(1e-6));
    CHECK(*report.ratio > 0.85);
    CHECK(*report.ratio < 1.15);
    CHECK(report.mean_rng_draws > 0);

    CHECK_THROWS_AS(measure_cost("lucky", 1000, 99, 1), std::invalid_argument);
    CHECK_THROWS_AS(measure_cost("no-such-method", 1000, 100, 1), std::invalid_argument);
}

TEST_CASE("measure_cost: recursive per-level report shape") {
    auto report = measure_cost("recursive", 100000, 100, 5);
    REQUIRE(!report.per_level.empty());
    CHECK(report.per_level[0].mean_target == doctest::Approx(100000.0));
    CHECK(report.per_level[0].runs == 100);
    // level targets shrink by roughly 4 per level
    for (std::size_t l = 1; l < std::min<std::size_t>(3, report.per_level.size()); ++l)
        CHECK(report.per_level[l].mean_target < 0.5 * report.per_level[l - 1].mean_target);
    CHECK(report.mean_recursion_depth >= 2.0);
}

TEST_CASE("majority_over_seeds") {
    CHECK(majority_over_seeds(5, [](std::uint64_t s) { return s != 6; }));
    CHECK(!majority_over_seeds(5, [](std::uint64_t s) { return s == 6; }));
}
