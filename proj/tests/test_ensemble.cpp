#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pdc/counting.hpp"
#include "pdc/ensemble.hpp"
#include "pdc/verify.hpp"

using namespace pdc;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<std::uint64_t> t_histogram(const std::function<std::uint64_t(RngStream&)>& draw,
                                       std::uint64_t seed, int samples, std::size_t bins) {
    RngStream rng(seed);
    std::vector<std::uint64_t> h(bins, 0);
    for (int i = 0; i < samples; ++i) h[std::min<std::uint64_t>(draw(rng), bins - 1)]++;
    return h;
}
} // namespace

TEST_CASE("tilt parameter") {
    CHECK(kTiltC == doctest::Approx(kPi / std::sqrt(6.0)).epsilon(1e-15));
    CHECK(tilt_parameter(100) == doctest::Approx(0.8796290600762194).epsilon(1e-12));
    for (std::uint64_t n : {1, 2, 10, 999, 100000}) {
        CHECK(tilt_parameter(n) < tilt_parameter(n + 1));
        CHECK(tilt_parameter(n + 1) < 1.0);
    }
    CHECK(grand_canonical(64).x == tilt_parameter(64));
}

TEST_CASE("naive proposal: geometric marginals and draw count") {
    const std::uint64_t n = 100;
    GrandCanonical gc = grand_canonical(n);
    RngStream rng(7);
    const int trials = 100000;
    int z1_positive = 0;
    for (int i = 0; i < trials; ++i) {
        std::uint64_t before = rng.draws();
        auto [v, budget] = propose_naive(gc, rng);
        CHECK(budget.uniform_draws == n);
        CHECK(rng.draws() - before == n);
        if (v.multiplicity(1) >= 1) ++z1_positive;
    }
    // P(Z_1 >= 1) = x
    double se = std::sqrt(gc.x * (1 - gc.x) / trials);
    CHECK(std::fabs(double(z1_positive) / trials - gc.x) < 3 * se);
}

TEST_CASE("geometric inversion law") {
    RngStream rng(3);
    const double a = 0.5;
    const int trials = 100000;
    int c0 = 0, c_ge2 = 0;
    for (int i = 0; i < trials; ++i) {
        std::uint64_t z = sample_geometric_log(std::log(a), rng);
        if (z == 0) ++c0;
        if (z >= 2) ++c_ge2;
    }
    CHECK(std::fabs(c0 / double(trials) - 0.5) < 3 * std::sqrt(0.25 / trials));
    CHECK(std::fabs(c_ge2 / double(trials) - 0.25) < 3 * std::sqrt(0.1875 / trials));
}

TEST_CASE("poisson-process rate obeys the closed-form bound") {
    for (std::uint64_t n : {100ull, 10000ull, 1000000ull}) {
        double x = tilt_parameter(n);
        double s = poisson_process_rate(x);
        CHECK(s <= (kPi * kPi / 6.0) * x / (1.0 - x));
    }
    double s6 = poisson_process_rate(tilt_parameter(1000000));
    CHECK(s6 / 1000.0 == doctest::Approx(kTiltC).epsilon(0.05));
}

TEST_CASE("poisson proposal: same law of T as the naive engine") {
    const std::uint64_t n = 50;
    GrandCanonical gc = grand_canonical(n);
    GeometricProposal naive(gc, 1, n);
    PoissonProposal poisson(gc, 1, n);
    auto ha = t_histogram([&](RngStream& r) { return weighted_sum(naive.propose(r)); }, 11, 100000, 300);
    auto hb = t_histogram([&](RngStream& r) { return weighted_sum(poisson.propose(r)); }, 12, 100000, 300);
    CHECK(chi_square_two_sample(ha, hb).p_value > 0.001);
}

TEST_CASE("largest-index proposal: normalized CDF and same law of T") {
    const std::uint64_t n = 100;
    GrandCanonical gc = grand_canonical(n);
    LargestIndexProposal ross(gc);
    CHECK(std::fabs(ross.cdf_total() - 1.0) < 1e-10);

    GrandCanonical gc50 = grand_canonical(50);
    GeometricProposal naive(gc50, 1, 50);
    LargestIndexProposal ross50(gc50);
    PoissonProposal poisson50(gc50, 1, 50);
    auto ha = t_histogram([&](RngStream& r) { return weighted_sum(naive.propose(r)); }, 21, 100000, 300);
    auto hb = t_histogram([&](RngStream& r) { return weighted_sum(ross50.propose(r)); }, 22, 100000, 300);
    auto hc = t_histogram([&](RngStream& r) { return weighted_sum(poisson50.propose(r)); }, 23, 100000, 300);
    CHECK(chi_square_two_sample(ha, hb).p_value > 0.001);
    CHECK(chi_square_two_sample(hb, hc).p_value > 0.001);

    // all-zero probability equals the finite Euler product
    RngStream rng(5);
    int zeros = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i)
        if (ross50.propose(rng).counts.empty()) ++zeros;
    double p0 = std::exp(log_euler_factor(gc50.x, 50));
    CHECK(std::fabs(zeros / double(trials) - p0) < 3 * std::sqrt(p0 * (1 - p0) / trials));
}

TEST_CASE("parity bits: marginal, reconstruction, and vanishing-tilt limit") {
    const std::uint64_t n = 100;
    GrandCanonical gc = grand_canonical(n);
    RngStream rng(17);
    const int trials = 100000;
    int ones = 0;
    for (int i = 0; i < trials; ++i) {
        auto [eps, budget] = propose_parity(gc, 1, rng);
        if (!eps.ones.empty() && eps.ones.front() == 1) ++ones;
    }
    double p1 = gc.x / (1.0 + gc.x);
    CHECK(std::fabs(ones / double(trials) - p1) < 3 * std::sqrt(p1 * (1 - p1) / trials));

    // eps_1(x) + 2 Z_1(x^2) must be distributed as Z_1(x)
    GrandCanonical gcsq{n, gc.x * gc.x};
    auto ha = t_histogram(
        [&](RngStream& r) {
            auto [eps, b1] = propose_parity(gc, 1, r);
            std::uint64_t bit = (!eps.ones.empty() && eps.ones.front() == 1) ? 1 : 0;
            return bit + 2 * sample_geometric_log(std::log(gcsq.x), r);
        },
        31, 100000, 64);
    auto hb = t_histogram(
        [&](RngStream& r) { return sample_geometric_log(std::log(gc.x), r); }, 32, 100000, 64);
    CHECK(chi_square_two_sample(ha, hb).p_value > 0.001);

    // x -> 0: all bits zero almost surely
    GrandCanonical tiny{100, 1e-6};
    RngStream rng2(9);
    std::uint64_t total_ones = 0;
    for (int i = 0; i < 1000; ++i) total_ones += propose_parity(tiny, 1, rng2).first.ones.size();
    CHECK(total_ones <= 3);
}

TEST_CASE("weighted sums") {
    MultiplicityVector v;
    CHECK(weighted_sum(v) == 0);
    v.add(2, 3);
    v.normalize();
    CHECK(weighted_sum(v) == 6);
    MultiplicityVector w;
    w.add(3, 2);
    w.add(1, 1);
    w.normalize();
    CHECK(weighted_sum(w) == 7);
    CHECK(w.multiplicity(3) == 2);
    CHECK(w.multiplicity(2) == 0);
}

TEST_CASE("grand-canonical product probability is constant on a weight class") {
    // P(Z = lambda) = x^n prod_{i<=n}(1-x^i) for every partition of n = 12
    const std::uint64_t n = 12;
    const double x = tilt_parameter(n);
    double expect = double(n) * std::log(x) + log_euler_factor(x, n);
    RngStream pick(99);
    auto idx = enumerate_partitions(n);
    for (int t = 0; t < 20; ++t) {
        const auto& p = idx.at(pick.next_below(idx.size()));
        auto mv = p.to_multiplicities();
        double lp = 0.0;
        for (std::uint64_t i = 1; i <= n; ++i) {
            double xi = std::pow(x, double(i));
            lp += std::log(1 - xi) + double(mv.multiplicity(i)) * std::log(xi);
        }
        CHECK(lp == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("bounded tilt solver") {
    // closed form at k = 2: n = x/(1-x)
    CHECK(solve_bounded_tilt(7, 2) == doctest::Approx(7.0 / 8.0).epsilon(1e-10));
    // large k recovers the unrestricted tilt
    CHECK(std::fabs(solve_bounded_tilt(10000, 1000000) - tilt_parameter(10000)) < 1e-3);
    // plug-back residual
    double x = solve_bounded_tilt(1000, 50);
    double sum = 0;
    for (int i = 1; i < 50; ++i) sum += i * std::pow(x, i) / (1 - std::pow(x, i));
    CHECK(std::fabs(sum - 1000.0) / 1000.0 < 1e-10);
    CHECK_THROWS_AS(solve_bounded_tilt(10, 1), std::invalid_argument);
}

TEST_CASE("set-partition tilt") {
    for (std::uint64_t n : {2ull, 10ull, 1000ull, 1000000ull}) {
        double x = set_partition_tilt(n);
        CHECK(std::fabs(x * std::exp(x) - double(n)) / double(n) < 1e-10);
    }
    for (std::uint64_t n : {10ull, 100ull, 10000ull, 1000000ull}) {
        double x = set_partition_tilt(n);
        double ln = std::log(double(n));
        CHECK(x < ln);
        CHECK(x > ln - std::log(ln) - 1.0);
    }
}

TEST_CASE("set-partition proposal: rates") {
    const std::uint64_t n = 100;
    const double x = set_partition_tilt(n);
    RngStream rng(13);
    const int trials = 100000;
    double z1 = 0;
    for (int i = 0; i < trials; ++i) z1 += propose_set_partition(n, x, rng).first.multiplicity(1);
    // lambda_1 = x; the sample mean has variance lambda_1/trials
    CHECK(std::fabs(z1 / trials - x) < 3 * std::sqrt(x / trials));

    // sum of rates is e^x - 1; the tail past a few multiples of x collapses
    // superexponentially (numerically ~3e-5 past 4x and ~1e-8 past 5x here)
    const double xt = set_partition_tilt(1000);
    double total = 0, tail4 = 0, tail5 = 0;
    for (std::uint64_t i = 1; i <= 1000; ++i) {
        double rate = std::exp(i * std::log(xt) - std::lgamma(double(i) + 1.0));
        total += rate;
        if (double(i) > 4.0 * xt) tail4 += rate;
        if (double(i) > 5.0 * xt) tail5 += rate;
    }
    CHECK(total == doctest::Approx(std::exp(xt) - 1.0).epsilon(1e-10));
    CHECK(tail4 < 1e-4);
    CHECK(tail5 < 1e-6);
}

TEST_CASE("plane-array proposal: tilt, box, marginal, and calibration") {
    CHECK(plane_tilt(1000000) == doctest::Approx(std::exp(-0.013396304405846758)).epsilon(1e-12));

    for (std::uint64_t n : {6ull, 1000ull, 100000ull}) {
        double x = plane_tilt(n);
        std::uint64_t b = plane_box(n);
        double log_tail = (b + 1) * std::log(x) +
                          std::log(((b + 1) * (1 - x) + x) / ((1 - x) * (1 - x)));
        CHECK(log_tail < -50.0 * std::log(2.0));
    }

    // P(Z_{0,0} >= 1) = x
    const std::uint64_t n = 50;
    const double x = plane_tilt(n);
    RngStream rng(23);
    const int trials = 100000;
    int nonzero = 0;
    for (int i = 0; i < trials; ++i) {
        auto [g, budget] = propose_plane_array(n, rng);
        for (const auto& [ci, cj, cz] : g.cells)
            if (ci == 0 && cj == 0) ++nonzero;
    }
    CHECK(std::fabs(nonzero / double(trials) - x) < 3 * std::sqrt(x * (1 - x) / trials));

    // mean weight / n within 5% at n = 1e4 over 1e3 draws
    RngStream rng2(29);
    double mean_w = 0;
    for (int i = 0; i < 1000; ++i) mean_w += double(plane_weight(propose_plane_array(10000, rng2).first));
    mean_w /= 1000.0;
    CHECK(mean_w / 10000.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("ensemble calibration at n = 1e4") {
    const std::uint64_t n = 10000;
    GrandCanonical gc = grand_canonical(n);
    PoissonProposal engine(gc, 1, n);
    RngStream rng(37);
    const int trials = 100000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < trials; ++i) {
        double t = double(weighted_sum(engine.propose(rng)));
        s1 += t;
        s2 += t * t;
    }
    double mean = s1 / trials;
    double var = s2 / trials - mean * mean;
    CHECK(mean / double(n) > 0.97);
    CHECK(mean / double(n) < 1.03);
    double scaled = var / std::pow(double(n), 1.5);
    CHECK(scaled > 1.45);
    CHECK(scaled < 1.70);
}

TEST_CASE("poisson proposal draw budget at n = 1e6") {
    const std::uint64_t n = 1000000;
    GrandCanonical gc = grand_canonical(n);
    PoissonProposal engine(gc, 1, n);
    RngStream rng(41);
    const int trials = 300;
    std::uint64_t before = rng.draws();
    for (int i = 0; i < trials; ++i) engine.propose(rng);
    double mean_draws = double(rng.draws() - before) / trials;
    CHECK(mean_draws <= 2.0 * kTiltC * std::sqrt(double(n)));
}
