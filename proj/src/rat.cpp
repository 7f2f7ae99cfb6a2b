#include "hyp/rat.hpp"

namespace hyp {

Rat Rat::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rat::parse: empty string");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(mpq_class(mpz_class(s)));
        }
        mpz_class n(s.substr(0, slash));
        mpz_class d(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("Rat::parse: zero denominator");
        mpq_class q(n, d);
        q.canonicalize();
        return Rat(q);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (...) {
        throw std::invalid_argument("Rat::parse: malformed rational '" + s + "'");
    }
}

long Rat::as_long() const {
    if (!is_integer()) throw std::domain_error("Rat::as_long: not an integer: " + str());
    mpz_class n = num();
    if (!n.fits_slong_p()) throw std::domain_error("Rat::as_long: out of range");
    return n.get_si();
}

Rat Rat::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return Rat(q);
}

Rat Rat::pow_int(long e) const {
    if (e == 0) return Rat(1);
    bool inv = e < 0;
    unsigned long ue = inv ? static_cast<unsigned long>(-(e + 1)) + 1ul : static_cast<unsigned long>(e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), ue);
    mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), ue);
    if (inv) {
        if (n == 0) throw std::domain_error("Rat::pow_int: zero to negative power");
        std::swap(n, d);
    }
    mpq_class q(n, d);
    q.canonicalize();
    return Rat(q);
}

std::string Rat::str() const {
    if (is_integer()) return num().get_str();
    return num().get_str() + "/" + den().get_str();
}

} // namespace hyp
