#include "pdc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pdc {

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    if (bound == 1) return 0;
    // mask rejection: round bound up to 2^k, reject values >= bound
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
        std::uint64_t r = next_u64() & mask;
        if (r < bound) return r;
    }
}

std::uint64_t sample_geometric_log(double log_a, RngStream& rng) {
    if (!(log_a < 0.0)) throw std::invalid_argument("sample_geometric_log: need ln a < 0");
    double u = rng.next_double();
    return static_cast<std::uint64_t>(std::log(u) / log_a);
}

namespace {

std::uint64_t poisson_spacings(double mean, RngStream& rng) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.next_double();
    } while (p > limit);
    return k - 1;
}

// Hormann (1993), "The transformed rejection method for generating Poisson
// random variables", algorithm PTRS. Valid for mean >= 10.
std::uint64_t poisson_ptrs(double mean, RngStream& rng) {
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = rng.next_double() - 0.5;
        double v = rng.next_double();
        double us = 0.5 - std::fabs(u);
        double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

} // namespace

std::uint64_t sample_poisson(double mean, RngStream& rng) {
    if (!(mean >= 0.0)) throw std::invalid_argument("sample_poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    return mean < 10.0 ? poisson_spacings(mean, rng) : poisson_ptrs(mean, rng);
}

} // namespace pdc
