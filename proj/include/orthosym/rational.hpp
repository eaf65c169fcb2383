#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace orthosym {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// "num/den", or "num" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational parse_rational(const std::string& text) {
    Rational r(text, 10);
    r.canonicalize();
    return r;
}

inline Rational pow(const Rational& base, unsigned exp) {
    Rational out(1);
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
}

// Floor of a rational as a 64-bit integer.
inline std::int64_t floor_i64(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q.get_si();
}

}  // namespace orthosym
