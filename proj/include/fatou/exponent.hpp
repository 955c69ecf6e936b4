#pragma once

#include "fatou/rational.hpp"

#include <string>
#include <tuple>

namespace fatou {

// Exponent (g0,g1,g2) of a monomial x^g0 * l^g1 * l2^g2, where
// l = -1/log x and l2 = l(l(x)). Monomials are compared lexicographically;
// the smallest key is the leading (dominant) term as x -> 0+.
struct ExponentTriple {
    Rational g0;
    long g1 = 0;
    long g2 = 0;

    ExponentTriple() : g0(0) {}
    ExponentTriple(Rational a, long b = 0, long c = 0) : g0(std::move(a)), g1(b), g2(c) {}

    friend bool operator==(const ExponentTriple& a, const ExponentTriple& b)
    {
        return a.g0 == b.g0 && a.g1 == b.g1 && a.g2 == b.g2;
    }
    friend bool operator!=(const ExponentTriple& a, const ExponentTriple& b) { return !(a == b); }
    friend bool operator<(const ExponentTriple& a, const ExponentTriple& b)
    {
        if (a.g0 != b.g0)
            return a.g0 < b.g0;
        return std::tie(a.g1, a.g2) < std::tie(b.g1, b.g2);
    }
    friend bool operator<=(const ExponentTriple& a, const ExponentTriple& b) { return !(b < a); }
    friend bool operator>(const ExponentTriple& a, const ExponentTriple& b) { return b < a; }
    friend bool operator>=(const ExponentTriple& a, const ExponentTriple& b) { return !(a < b); }

    ExponentTriple operator+(const ExponentTriple& o) const
    {
        return ExponentTriple(g0 + o.g0, g1 + o.g1, g2 + o.g2);
    }

    std::string str() const;
};

} // namespace fatou
