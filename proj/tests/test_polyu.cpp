#include "fatou/polyu.hpp"

#include "doctest.h"

#include <random>

using namespace fatou;

namespace {

PolyU randpoly(std::mt19937& rng, int maxdeg)
{
    std::uniform_int_distribution<int> cd(-4, 4), dd(0, maxdeg);
    std::vector<Rational> v(static_cast<std::size_t>(dd(rng)) + 1);
    for (auto& c : v)
        c = cd(rng);
    return PolyU(std::move(v));
}

TruncatedTransseries as_ell_series(const PolyU& p)
{
    TruncatedTransseries t;
    for (long i = 0; i <= p.degree(); ++i)
        t.accumulate(ExponentTriple(0, -i, 0), p.coeff(static_cast<std::size_t>(i)));
    t.normalize();
    return t;
}

} // namespace

TEST_CASE("polynomial division and gcd")
{
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        PolyU a = randpoly(rng, 6);
        PolyU b = randpoly(rng, 4);
        if (b.is_zero())
            continue;
        auto [q, r] = PolyU::divmod(a, b);
        CHECK(b * q + r == a);
        CHECK((r.is_zero() || r.degree() < b.degree()));
    }
    PolyU u = PolyU::u();
    PolyU g = PolyU::gcd((u * u - PolyU::constant(1)), (u - PolyU::constant(1)) * (u + PolyU::constant(2)));
    CHECK(g == u - PolyU::constant(1));
}

TEST_CASE("RationalU stays reduced with monic denominator")
{
    PolyU u = PolyU::u();
    RationalU q(u * u - PolyU::constant(1), u - PolyU::constant(1));
    CHECK(q == RationalU::from_poly(u + PolyU::constant(1)));
    RationalU half(PolyU::constant(1), PolyU({Rational(0), Rational(2)})); // 1/(2u)
    CHECK(half.den() == u);
    CHECK(half.num() == PolyU::constant(Rational(1, 2)));

    RationalU a(PolyU::constant(1), u);
    CHECK((a * a.reciprocal()) == RationalU(Rational(1)));
    CHECK(a.derivative() == RationalU(-PolyU::constant(1), u * u));
    CHECK_THROWS_AS(RationalU(u, PolyU()), std::domain_error);
}

TEST_CASE("laurent_expand on reference examples")
{
    PolyU u = PolyU::u();
    RationalU invu(PolyU::constant(1), u);
    TruncatedTransseries e1 = laurent_expand(invu, 5);
    CHECK(e1 == TruncatedTransseries::monomial(1, ExponentTriple(0, 1, 0)));
    CHECK(laurent_order(invu) == 1);

    // 1/(u-1) = l + l^2 + l^3 + ... (geometric)
    RationalU geo(PolyU::constant(1), u - PolyU::constant(1));
    TruncatedTransseries e2 = laurent_expand(geo, 6);
    for (long k = 1; k <= 6; ++k)
        CHECK(e2.coeff(ExponentTriple(0, k, 0)) == 1);
    CHECK(e2.size() == 6);

    // u^2/(u+1) = l^-1 - 1 + l - l^2 + ...
    RationalU q(u * u, u + PolyU::constant(1));
    TruncatedTransseries e3 = laurent_expand(q, 6);
    CHECK(laurent_order(q) == -1);
    CHECK(e3.coeff(ExponentTriple(0, -1, 0)) == 1);
    CHECK(e3.coeff(ExponentTriple(0, 0, 0)) == -1);
    CHECK(e3.coeff(ExponentTriple(0, 1, 0)) == 1);
    CHECK(e3.coeff(ExponentTriple(0, 2, 0)) == -1);
    CHECK(e3.coeff(ExponentTriple(0, 3, 0)) == 1);
}

TEST_CASE("laurent_expand multiplies back to the numerator")
{
    std::mt19937 rng(4242);
    const long M = 10;
    for (int trial = 0; trial < 40; ++trial) {
        PolyU num = randpoly(rng, 4);
        PolyU den = randpoly(rng, 4);
        if (num.is_zero() || den.is_zero())
            continue;
        RationalU q(num, den);
        if (q.is_zero())
            continue;
        TruncatedTransseries exp = laurent_expand(q, M);
        TruncatedTransseries back = mul(exp, as_ell_series(q.den())) - as_ell_series(q.num());
        if (!back.is_zero())
            CHECK(back.order().g1 >= laurent_order(q) + M - q.den().degree());
    }
}

TEST_CASE("from_laurent_poly embeds Laurent polynomials in l")
{
    std::map<long, Rational> terms{{-1, Rational(2)}, {3, Rational(1)}};
    RationalU q = RationalU::from_laurent_poly(terms);
    TruncatedTransseries e = laurent_expand(q, 10);
    CHECK(e.coeff(ExponentTriple(0, -1, 0)) == 2);
    CHECK(e.coeff(ExponentTriple(0, 3, 0)) == 1);
    CHECK(e.size() == 2);

    RationalU c = RationalU::from_laurent_poly({{0, Rational(7)}});
    CHECK(c == RationalU(Rational(7)));
}

TEST_CASE("exact and numeric evaluation agree with the formula")
{
    PolyU u = PolyU::u();
    RationalU q(u * u, u + PolyU::constant(1));
    CHECK(q.eval<Rational>(Rational(3)) == Rational(9, 4));
    CHECK_THROWS_AS(q.eval<Rational>(Rational(-1)), std::domain_error);
}
