#include "hyp/bigfloat.hpp"

#include <algorithm>
#include <sstream>

namespace hyp {

namespace {
int widest(const BigFloat& a, const BigFloat& b) { return std::max(a.digits(), b.digits()); }
} // namespace

BigFloat BigFloat::from_rat(const Rat& r, int digits) {
    BigFloat x(digits);
    mpfr_set_q(x.v_, r.raw().get_mpq_t(), MPFR_RNDN);
    return x;
}

BigFloat BigFloat::from_long(long n, int digits) {
    BigFloat x(digits);
    mpfr_set_si(x.v_, n, MPFR_RNDN);
    return x;
}

BigFloat BigFloat::pi(int digits) {
    BigFloat x(digits);
    mpfr_const_pi(x.v_, MPFR_RNDN);
    return x;
}

BigFloat BigFloat::euler(int digits) {
    BigFloat x(digits);
    mpfr_const_euler(x.v_, MPFR_RNDN);
    return x;
}

BigFloat BigFloat::catalan(int digits) {
    BigFloat x(digits);
    mpfr_const_catalan(x.v_, MPFR_RNDN);
    return x;
}

BigFloat BigFloat::operator-() const {
    BigFloat r(digits_);
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

#define HYP_BINOP(name, fn)                                   \
    BigFloat BigFloat::operator name(const BigFloat& o) const { \
        BigFloat r(widest(*this, o));                         \
        fn(r.v_, v_, o.v_, MPFR_RNDN);                        \
        return r;                                             \
    }
HYP_BINOP(+, mpfr_add)
HYP_BINOP(-, mpfr_sub)
HYP_BINOP(*, mpfr_mul)
HYP_BINOP(/, mpfr_div)
#undef HYP_BINOP

#define HYP_UNOP(name, fn)              \
    BigFloat BigFloat::name() const {   \
        BigFloat r(digits_);            \
        fn(r.v_, v_, MPFR_RNDN);        \
        return r;                       \
    }
HYP_UNOP(abs, mpfr_abs)
HYP_UNOP(sqrt, mpfr_sqrt)
HYP_UNOP(ln, mpfr_log)
HYP_UNOP(exp, mpfr_exp)
HYP_UNOP(sin, mpfr_sin)
HYP_UNOP(cos, mpfr_cos)
HYP_UNOP(atanh, mpfr_atanh)
#undef HYP_UNOP

BigFloat BigFloat::pow(const BigFloat& e) const {
    BigFloat r(widest(*this, e));
    mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::pow_long(long e) const {
    BigFloat r(digits_);
    mpfr_pow_si(r.v_, v_, e, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::eps(int k, int digits) {
    BigFloat r(digits);
    mpfr_set_si(r.v_, 10, MPFR_RNDN);
    mpfr_pow_si(r.v_, r.v_, -k, MPFR_RNDN);
    return r;
}

std::string BigFloat::str(int out_digits) const {
    if (is_nan()) return "nan";
    if (is_inf()) return sign() > 0 ? "inf" : "-inf";
    int nd = out_digits > 0 ? out_digits : digits_;
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(nd), v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    bool neg = !mant.empty() && mant[0] == '-';
    if (neg) mant = mant.substr(1);
    if (mant.find_first_not_of('0') == std::string::npos) return "0";
    std::ostringstream os;
    if (neg) os << "-";
    os << mant[0] << "." << mant.substr(1) << "e" << (e - 1);
    return os.str();
}

} // namespace hyp
