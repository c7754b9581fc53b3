#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qlef
{

// Arbitrary-precision rationals; every coefficient in the library is one of these.
using Rational = mpq_class;

inline bool is_zero(const Rational &x)
{
    return sgn(x) == 0;
}

// Canonical "num/den" text, denominator always present ("5/1").
inline std::string to_fraction_string(const Rational &x)
{
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// Accepts "num/den" or a bare integer; rejects decimals and exponents.
inline Rational parse_fraction(std::string_view text)
{
    std::string s(text);
    if (s.empty() || s.find_first_of(".eE") != std::string::npos) {
        throw std::invalid_argument("not an exact fraction: '" + s + "'");
    }
    Rational r;
    if (r.set_str(s, 10) != 0) {
        throw std::invalid_argument("not an exact fraction: '" + s + "'");
    }
    if (sgn(r.get_den()) == 0) {
        throw std::invalid_argument("zero denominator: '" + s + "'");
    }
    r.canonicalize();
    return r;
}

inline Rational factorial(unsigned n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

inline bool is_integer(const Rational &x)
{
    return x.get_den() == 1;
}

} // namespace qlef
