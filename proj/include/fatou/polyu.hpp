#pragma once

#include "fatou/rational.hpp"
#include "fatou/transseries.hpp"

#include <map>
#include <string>
#include <vector>

namespace fatou {

// Polynomial in u = l^{-1} = -log x with exact rational coefficients.
// coeffs()[i] is the coefficient of u^i; trailing zeros are trimmed, the zero
// polynomial has an empty coefficient list.
class PolyU {
public:
    PolyU() = default;
    explicit PolyU(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static PolyU constant(const Rational& c) { return PolyU({c}); }
    static PolyU u() { return PolyU({Rational(0), Rational(1)}); }
    // c * u^k
    static PolyU monomial(const Rational& c, std::size_t k);

    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

    PolyU operator-() const;
    friend PolyU operator+(const PolyU& a, const PolyU& b);
    friend PolyU operator-(const PolyU& a, const PolyU& b);
    friend PolyU operator*(const PolyU& a, const PolyU& b);
    PolyU scaled(const Rational& s) const;
    PolyU derivative() const;

    friend bool operator==(const PolyU& a, const PolyU& b) { return a.c_ == b.c_; }

    // Quotient and remainder of exact polynomial division.
    static std::pair<PolyU, PolyU> divmod(const PolyU& a, const PolyU& b);
    // Monic greatest common divisor (gcd(0,0) = 0).
    static PolyU gcd(PolyU a, PolyU b);

    template <typename Num> Num eval(const Num& u) const
    {
        Num acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc *= u;
            acc += rational_cast<Num>(*it);
        }
        return acc;
    }

    std::string str() const;

private:
    void trim();
    std::vector<Rational> c_;
};

// Rational function in u, kept reduced (gcd divided out) with monic
// denominator. Solver-produced instances have denominators that are powers of
// the germ's leading polynomial P1, but the arithmetic is general.
class RationalU {
public:
    RationalU() : num_(), den_(PolyU::constant(1)) {}
    RationalU(PolyU num, PolyU den);
    RationalU(const Rational& c) : RationalU(PolyU::constant(c), PolyU::constant(1)) {}
    static RationalU from_poly(PolyU p) { return RationalU(std::move(p), PolyU::constant(1)); }
    // Laurent polynomial in l: map from l-exponent g1 to coefficient.
    static RationalU from_laurent_poly(const std::map<long, Rational>& terms);

    const PolyU& num() const { return num_; }
    const PolyU& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalU operator-() const;
    friend RationalU operator+(const RationalU& a, const RationalU& b);
    friend RationalU operator-(const RationalU& a, const RationalU& b);
    friend RationalU operator*(const RationalU& a, const RationalU& b);
    friend RationalU operator/(const RationalU& a, const RationalU& b);
    RationalU reciprocal() const;
    RationalU derivative() const; // d/du
    RationalU scaled(const Rational& s) const;

    friend bool operator==(const RationalU& a, const RationalU& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    template <typename Num> Num eval(const Num& u) const
    {
        Num d = den_.eval(u);
        if (d == 0)
            throw std::domain_error("RationalU::eval: denominator vanishes");
        return num_.eval(u) / d;
    }

    std::string str() const;

private:
    PolyU num_, den_;
};

// Laurent expansion of Q(1/l) around l = 0: M coefficients computed exactly,
// starting at the leading exponent n0 = deg(den) - deg(num) (possibly
// negative). Returns a pure l-series (all g0 = g2 = 0).
TruncatedTransseries laurent_expand(const RationalU& Q, long M);

// Leading l-exponent of the Laurent expansion of Q, without expanding.
long laurent_order(const RationalU& Q);

} // namespace fatou
