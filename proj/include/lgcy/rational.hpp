#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lgcy {

// Canonical arbitrary-precision rational. mpq_class keeps gcd(num, den) = 1
// and den > 0 after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(std::string_view s) {
    std::string str(s);
    while (!str.empty() && (str.back() == ' ' || str.back() == '\t')) str.pop_back();
    size_t b = str.find_first_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty rational");
    str = str.substr(b);
    if (!str.empty() && str[0] == '+') str = str.substr(1);
    Rational r;
    if (r.set_str(str, 10) != 0) throw std::invalid_argument("bad rational '" + std::string(s) + "'");
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    r.canonicalize();
    return r;
}

inline long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in long");
    return z.get_si();
}

inline long to_long(const Rational& r) {
    if (!is_integer(r)) throw std::domain_error("rational " + to_string(r) + " is not an integer");
    return to_long(Integer(r.get_num()));
}

inline Integer floor(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer binomial(long n, long k) {
    if (k < 0) return 0;
    if (n >= 0) {
        if (k > n) return 0;
        Integer r;
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return r;
    }
    // binom(n, k) = (-1)^k binom(k - n - 1, k) for negative n
    Integer r = binomial(k - n - 1, k);
    return (k % 2) ? Integer(-r) : r;
}

inline Integer factorial(long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

inline long mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

inline long lcm(long a, long b) { return std::lcm(a, b); }

}  // namespace lgcy
