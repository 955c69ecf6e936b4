#pragma once

#include "fatou/exponent.hpp"
#include "fatou/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace fatou {

// A finite, order-sorted piece of a power-iterated-log transseries
//   sum of c * x^g0 * l^g1 * l2^g2,
// with exact rational coefficients and two-dimensional truncation metadata:
//   x_cutoff N  : monomials with g0 > N are discarded,
//   ell_cutoff M: within each x-power, at most M l-powers are kept, counted
//                 from the block's leading l-exponent.
// A disengaged cutoff means "unlimited". Results of arithmetic carry the
// minimum of the operands' cutoffs.
class TruncatedTransseries {
public:
    using TermMap = std::map<ExponentTriple, Rational>;

    TruncatedTransseries() = default;
    TruncatedTransseries(std::optional<Rational> x_cutoff, std::optional<long> ell_cutoff)
        : x_cutoff_(std::move(x_cutoff)), ell_cutoff_(ell_cutoff)
    {
    }

    static TruncatedTransseries monomial(const Rational& c, const ExponentTriple& e);
    static TruncatedTransseries constant(const Rational& c) { return monomial(c, ExponentTriple()); }
    static TruncatedTransseries identity() { return monomial(1, ExponentTriple(1)); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::optional<Rational>& x_cutoff() const { return x_cutoff_; }
    const std::optional<long>& ell_cutoff() const { return ell_cutoff_; }

    // Coefficient of a monomial, zero if absent.
    Rational coeff(const ExponentTriple& e) const;

    // Leading term = lexicographically smallest monomial (dominant as x->0+).
    std::pair<ExponentTriple, Rational> leading_term() const;
    ExponentTriple order() const { return leading_term().first; }

    // In-place accumulation used by builders; call normalize() when done.
    void accumulate(const ExponentTriple& e, const Rational& c);
    void normalize();

    // Copy with tightened cutoffs applied.
    TruncatedTransseries with_cutoffs(std::optional<Rational> x_cutoff,
                                      std::optional<long> ell_cutoff) const;

    // Replace the cutoff metadata outright (caller asserts the wider window is
    // mathematically justified, e.g. before multiplying by a high-order factor).
    void rebase_cutoffs(std::optional<Rational> x_cutoff, std::optional<long> ell_cutoff)
    {
        x_cutoff_ = std::move(x_cutoff);
        ell_cutoff_ = ell_cutoff;
        normalize();
    }

    TruncatedTransseries operator-() const;
    TruncatedTransseries scaled(const Rational& c) const;

    friend TruncatedTransseries add(const TruncatedTransseries& a, const TruncatedTransseries& b);
    friend TruncatedTransseries mul(const TruncatedTransseries& a, const TruncatedTransseries& b);

    friend TruncatedTransseries operator+(const TruncatedTransseries& a,
                                          const TruncatedTransseries& b)
    {
        return add(a, b);
    }
    friend TruncatedTransseries operator-(const TruncatedTransseries& a,
                                          const TruncatedTransseries& b)
    {
        return add(a, -b);
    }
    friend TruncatedTransseries operator*(const TruncatedTransseries& a,
                                          const TruncatedTransseries& b)
    {
        return mul(a, b);
    }

    friend bool operator==(const TruncatedTransseries& a, const TruncatedTransseries& b)
    {
        return a.terms_ == b.terms_;
    }

    // Canonical human-readable form, e.g. "x - x^2*l^-1"; the inverse of
    // parse_transseries up to whitespace.
    std::string str() const;

private:
    TermMap terms_;
    std::optional<Rational> x_cutoff_;
    std::optional<long> ell_cutoff_;
};

// Termwise derivative d/dx; uses
//   d/dx (x^b l^g l2^d) = x^{b-1} (b l^g l2^d + g l^{g+1} l2^d + d l^{g+1} l2^{d+1}).
// The x-cutoff is decremented by one (differentiation loses one order in x).
TruncatedTransseries derive(const TruncatedTransseries& t);

// Formal antiderivative of x^{-alpha} * l^{-m} without constant term, by the
// integration-by-parts recursion; when the recursion ascends in l-powers
// forever (m < 0, alpha != 1) it is cut after M terms.
TruncatedTransseries antiderive_monomial(const Rational& alpha, long m, long M);

// Termwise antiderivative of a series without l2 monomials.
TruncatedTransseries antiderive(const TruncatedTransseries& t, long M);

// Multiplicative inverse 1/t as a truncated series (leading-term division
// followed by a geometric expansion). Requires finite cutoffs and no l2
// monomials in t.
TruncatedTransseries inverse(const TruncatedTransseries& t);

// Taylor increment Psi(f) - Psi computed as sum_{k>=1} (1/k!) Psi^{(k)} (f-x)^k
// where g = id - f (so f - x = -g). Requires ord(g) > (1,0,0) lexicographically.
TruncatedTransseries taylor_increment(const TruncatedTransseries& psi,
                                      const TruncatedTransseries& g, const Rational& N, long M);

} // namespace fatou
