#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>

namespace pdc {

/// Minimal 128-bit real (MPFR-backed), used only on the rare escalation
/// path of an acceptance coin whose double-precision threshold is within
/// the near-tie window of the drawn uniform.
class Real128 {
public:
    static constexpr mpfr_prec_t kPrec = 128;

    Real128() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
    Real128(double d) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, d, MPFR_RNDN); }
    Real128(std::uint64_t u) { mpfr_init2(v_, kPrec); mpfr_set_ui(v_, u, MPFR_RNDN); }
    explicit Real128(const mpz_class& z) { mpfr_init2(v_, kPrec); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
    Real128(const Real128& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real128& operator=(const Real128& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    ~Real128() { mpfr_clear(v_); }

    static Real128 pi() { Real128 r; mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

    friend Real128 operator+(const Real128& a, const Real128& b) { Real128 r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real128 operator-(const Real128& a, const Real128& b) { Real128 r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real128 operator*(const Real128& a, const Real128& b) { Real128 r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real128 operator/(const Real128& a, const Real128& b) { Real128 r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    Real128 operator-() const { Real128 r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    friend Real128 exp(const Real128& a) { Real128 r; mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real128 log(const Real128& a) { Real128 r; mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real128 log1p(const Real128& a) { Real128 r; mpfr_log1p(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real128 sqrt(const Real128& a) { Real128 r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real128 pow_ui(const Real128& a, std::uint64_t e) { Real128 r; mpfr_pow_ui(r.v_, a.v_, e, MPFR_RNDN); return r; }

    friend bool operator<(const Real128& a, const Real128& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    int cmp(double d) const { return mpfr_cmp_d(v_, d); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

/// exp(-c/sqrt(n)) at 128 bits, c = pi/sqrt(6).
Real128 tilt_parameter_hp(std::uint64_t n);

/// ln p_n at 128 working bits: exact big-integer count below the cutoff,
/// the hr1 formula evaluated in Real128 above it (the approximation error
/// of hr1 itself, < 1e-16 relative in the log, is the exactness floor).
Real128 log_partition_count_hp(std::uint64_t n, std::uint64_t exact_cutoff);

} // namespace pdc
