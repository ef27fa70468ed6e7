#include "pdc/counting.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

namespace pdc {

const BigCount CountTable::zero_ = 0;
const BigCount CountTable::one_ = 1;

double log_big(const BigCount& v) {
    if (v <= 0) throw std::invalid_argument("log_big: need a positive value");
    signed long exp2;
    double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * 0.69314718055994530942;
}

std::uint64_t CountTable::memory_cap_bytes() {
    if (const char* env = std::getenv("PDC_TABLE_MAX_BYTES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return 4ull << 30; // 4 GiB
}

CountTable::CountTable(std::uint64_t max_part, std::uint64_t max_weight, Mode mode)
    : max_part_(max_part), max_weight_(max_weight), mode_(mode) {
    if (max_part < 1) throw std::invalid_argument("CountTable: max_part must be >= 1");
    const std::uint64_t stored_rows = (mode == Mode::full_grid) ? max_part : 1;
    // 48 bytes/entry approximates mpz header + limbs at these sizes
    if (stored_rows * (max_weight + 1) > memory_cap_bytes() / 48)
        throw std::length_error("CountTable: allocation exceeds PDC_TABLE_MAX_BYTES cap");

    if (mode == Mode::full_grid) {
        rows_.resize(max_part);
        for (std::uint64_t k = 1; k <= max_part; ++k) {
            auto& row = rows_[k - 1];
            row.resize(max_weight + 1);
            row[0] = 1;
            for (std::uint64_t m = 1; m <= max_weight; ++m) {
                if (k == 1)
                    row[m] = 1;
                else {
                    row[m] = rows_[k - 2][m];
                    if (m >= k) row[m] += row[m - k];
                }
            }
        }
    } else {
        // in-place update: after pass k the row holds p(<=k, .)
        rows_.resize(1);
        auto& row = rows_[0];
        row.assign(max_weight + 1, BigCount(1)); // p(<=1, m) = 1
        for (std::uint64_t k = 2; k <= max_part; ++k)
            for (std::uint64_t m = k; m <= max_weight; ++m)
                row[m] += row[m - k];
    }
}

const BigCount& CountTable::entries(std::uint64_t k, std::uint64_t m) const {
    if (k > max_part_ || m > max_weight_)
        throw std::out_of_range("CountTable::entries: index out of range");
    if (k == 0) return m == 0 ? one_ : zero_;
    if (mode_ != Mode::full_grid && k != max_part_)
        throw std::logic_error("CountTable::entries: intermediate rows not stored in final_row mode");
    return mode_ == Mode::full_grid ? rows_[k - 1][m] : rows_[0][m];
}

const BigCount& CountTable::row(std::uint64_t m) const {
    if (m > max_weight_) throw std::out_of_range("CountTable::row: index out of range");
    return mode_ == Mode::full_grid ? rows_[max_part_ - 1][m] : rows_[0][m];
}

namespace {

// Cache of exact p_m for m = 0..limit; one streamed recurrence pass fills
// every prefix, so the cache only ever grows.
struct ExactCountCache {
    std::mutex mu;
    std::vector<BigCount> p; // p[m] = p_m
    std::vector<double> log_p;

    void ensure(std::uint64_t n) {
        std::lock_guard<std::mutex> lock(mu);
        if (p.size() > n) return;
        std::vector<BigCount> row(n + 1, BigCount(1));
        for (std::uint64_t k = 2; k <= n; ++k)
            for (std::uint64_t m = k; m <= n; ++m)
                row[m] += row[m - k];
        p = std::move(row);
        log_p.resize(n + 1);
        log_p[0] = 0.0;
        for (std::uint64_t m = 1; m <= n; ++m) log_p[m] = log_big(p[m]);
    }
};

ExactCountCache& exact_cache() {
    static ExactCountCache cache;
    return cache;
}

} // namespace

BigCount partition_count(std::uint64_t n) {
    if (n == 0) return 1;
    auto& cache = exact_cache();
    cache.ensure(n);
    std::lock_guard<std::mutex> lock(cache.mu);
    return cache.p[n];
}

double hr1_log(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("hr1_log: n must be >= 1");
    const double nn = static_cast<double>(n) - 1.0 / 24.0;
    const double y = 2.0 * kTiltC * std::sqrt(nn);
    return y + std::log1p(-1.0 / y) - std::log(4.0 * std::sqrt(3.0) * nn);
}

double log_partition_count(std::uint64_t n, std::uint64_t exact_cutoff) {
    if (n > exact_cutoff) return hr1_log(n);
    auto& cache = exact_cache();
    cache.ensure(exact_cutoff);
    std::lock_guard<std::mutex> lock(cache.mu);
    return cache.log_p[n];
}

double log_euler_factor(double x, std::uint64_t max_part) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("log_euler_factor: need 0 < x < 1");
    const double tiny = 0x1.0p-75;
    double sum = 0.0;
    double xp = 1.0;
    std::uint64_t i = 0;
    for (;;) {
        if (max_part != 0 && i == max_part) return sum;
        ++i;
        xp *= x;
        if ((i & 0xfff) == 0) xp = std::pow(x, static_cast<double>(i)); // resync drift
        if (xp < tiny) break;
        sum += std::log1p(-xp);
    }
    // remaining tail: -sum_{i<I<=B} x^I/(1-x) to first order
    double top = (max_part == 0) ? 0.0 : std::pow(x, static_cast<double>(max_part) + 1.0);
    sum -= (xp - top) / (1.0 - x);
    return sum;
}

SumDistribution sum_distribution(std::uint64_t b, std::uint64_t n, double x) {
    if (b < 1) throw std::invalid_argument("sum_distribution: b must be >= 1");
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("sum_distribution: need 0 < x < 1");
    SumDistribution d;
    d.b = b;
    d.n = n;
    d.x = x;
    CountTable table(b, n, CountTable::Mode::final_row);
    const double log_x = std::log(x);
    const double log_prod = log_euler_factor(x, b);
    d.q.resize(n + 1);
    d.log_q.resize(n + 1);
    for (std::uint64_t j = 0; j <= n; ++j) {
        d.log_q[j] = log_big(table.row(j)) + static_cast<double>(j) * log_x + log_prod;
        d.q[j] = std::exp(d.log_q[j]);
        if (j == 0 || d.log_q[j] > d.log_max_q) {
            d.argmax = j;
            d.log_max_q = d.log_q[j];
        }
    }
    d.max_q = std::exp(d.log_max_q);
    return d;
}

double hit_probability(std::uint64_t n, double x, std::uint64_t exact_cutoff,
                       std::uint64_t max_part) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("hit_probability: need 0 < x < 1");
    if (max_part != 0 && max_part < n)
        throw std::invalid_argument("hit_probability: max_part must be 0 or >= n");
    double log_p = (n == 0) ? 0.0 : log_partition_count(n, exact_cutoff);
    return log_p + static_cast<double>(n) * std::log(x) + log_euler_factor(x, max_part);
}

} // namespace pdc
