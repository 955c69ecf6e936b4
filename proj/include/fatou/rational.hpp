#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace fatou {

// Exact rational coefficients and exponents. All formal-layer arithmetic is
// carried out in this type; nothing in ts-core ever rounds.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rat_pow(const Rational& base, long e)
{
    if (e == 0)
        return Rational(1);
    if (e < 0) {
        if (base == 0)
            throw std::domain_error("rat_pow: zero base with negative exponent");
        return rat_pow(Rational(1) / base, -e);
    }
    Rational r(1), b = base;
    long n = e;
    while (n > 0) {
        if (n & 1)
            r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

inline Rational factorial(long n)
{
    Integer f(1);
    for (long i = 2; i <= n; ++i)
        f *= i;
    return Rational(f);
}

inline std::string to_string(const Rational& q)
{
    return q.str();
}

// Exact-to-numeric conversion through integer strings, so it works for any
// arbitrary-precision float type as well as for Rational itself.
template <typename Num> Num rational_cast(const Rational& q)
{
    return Num(numerator(q).str()) / Num(denominator(q).str());
}

template <> inline Rational rational_cast<Rational>(const Rational& q)
{
    return q;
}

} // namespace fatou
