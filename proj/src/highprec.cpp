#include "pdc/highprec.hpp"

#include "pdc/counting.hpp"

namespace pdc {

Real128 tilt_parameter_hp(std::uint64_t n) {
    Real128 c = Real128::pi() / sqrt(Real128(std::uint64_t(6)));
    return exp(-(c / sqrt(Real128(n))));
}

Real128 log_partition_count_hp(std::uint64_t n, std::uint64_t exact_cutoff) {
    if (n == 0) return Real128(0.0);
    if (n <= exact_cutoff) return log(Real128(partition_count(n)));
    // hr1 in 128-bit arithmetic: y + ln(1 - 1/y) - ln(4 sqrt(3) (n - 1/24))
    Real128 nn = Real128(n) - Real128(1.0) / Real128(std::uint64_t(24));
    Real128 c = Real128::pi() / sqrt(Real128(std::uint64_t(6)));
    Real128 y = Real128(2.0) * c * sqrt(nn);
    return y + log1p(-(Real128(1.0) / y)) - log(Real128(4.0) * sqrt(Real128(std::uint64_t(3))) * nn);
}

} // namespace pdc
