#pragma once

#include "hyp/rat.hpp"

#include <mpfr.h>
#include <string>

namespace hyp {

// Arbitrary-precision real. Precision is carried in decimal digits; binary
// working precision adds guard bits. Operations take the widest operand's
// precision.
class BigFloat {
public:
    BigFloat() { mpfr_init2(v_, bits(kMinDigits)); mpfr_set_zero(v_, 1); digits_ = kMinDigits; }
    explicit BigFloat(int digits) { digits_ = clamp(digits); mpfr_init2(v_, bits(digits_)); mpfr_set_zero(v_, 1); }
    BigFloat(const BigFloat& o) { digits_ = o.digits_; mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { digits_ = o.digits_; mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) { digits_ = o.digits_; mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) { digits_ = o.digits_; mpfr_swap(v_, o.v_); }
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_rat(const Rat& r, int digits);
    static BigFloat from_long(long n, int digits);
    static BigFloat pi(int digits);
    static BigFloat euler(int digits);
    static BigFloat catalan(int digits);

    int digits() const { return digits_; }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_nan() const { return mpfr_nan_p(v_); }
    bool is_inf() const { return mpfr_inf_p(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    BigFloat operator-() const;
    BigFloat operator+(const BigFloat& o) const;
    BigFloat operator-(const BigFloat& o) const;
    BigFloat operator*(const BigFloat& o) const;
    BigFloat operator/(const BigFloat& o) const;
    BigFloat& operator+=(const BigFloat& o) { *this = *this + o; return *this; }
    BigFloat& operator-=(const BigFloat& o) { *this = *this - o; return *this; }
    BigFloat& operator*=(const BigFloat& o) { *this = *this * o; return *this; }
    BigFloat& operator/=(const BigFloat& o) { *this = *this / o; return *this; }

    bool operator<(const BigFloat& o) const { return mpfr_less_p(v_, o.v_); }
    bool operator<=(const BigFloat& o) const { return mpfr_lessequal_p(v_, o.v_); }
    bool operator>(const BigFloat& o) const { return mpfr_greater_p(v_, o.v_); }
    bool operator>=(const BigFloat& o) const { return mpfr_greaterequal_p(v_, o.v_); }

    BigFloat abs() const;
    BigFloat sqrt() const;
    BigFloat ln() const;
    BigFloat exp() const;
    BigFloat sin() const;
    BigFloat cos() const;
    BigFloat atanh() const;
    BigFloat pow(const BigFloat& e) const;
    BigFloat pow_long(long e) const;

    // 10^-k at this value's precision.
    static BigFloat eps(int k, int digits);

    std::string str(int out_digits = 0) const;

    static constexpr int kMinDigits = 20;
    static mpfr_prec_t bits(int digits) { return static_cast<mpfr_prec_t>(digits * 3.3219280948873623) + 32; }

private:
    static int clamp(int d) { return d < kMinDigits ? kMinDigits : d; }
    mpfr_t v_;
    int digits_ = kMinDigits;
};

} // namespace hyp
