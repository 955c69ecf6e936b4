#include "fatou/polyu.hpp"

#include <sstream>
#include <stdexcept>

namespace fatou {

void PolyU::trim()
{
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

PolyU PolyU::monomial(const Rational& c, std::size_t k)
{
    std::vector<Rational> v(k + 1, Rational(0));
    v[k] = c;
    return PolyU(std::move(v));
}

PolyU PolyU::operator-() const
{
    PolyU r = *this;
    for (auto& c : r.c_)
        c = -c;
    return r;
}

PolyU operator+(const PolyU& a, const PolyU& b)
{
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = a.coeff(i) + b.coeff(i);
    return PolyU(std::move(v));
}

PolyU operator-(const PolyU& a, const PolyU& b) { return a + (-b); }

PolyU operator*(const PolyU& a, const PolyU& b)
{
    if (a.is_zero() || b.is_zero())
        return PolyU();
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            v[i + j] += a.c_[i] * b.c_[j];
    return PolyU(std::move(v));
}

PolyU PolyU::scaled(const Rational& s) const
{
    if (s == 0)
        return PolyU();
    PolyU r = *this;
    for (auto& c : r.c_)
        c *= s;
    return r;
}

PolyU PolyU::derivative() const
{
    if (c_.size() <= 1)
        return PolyU();
    std::vector<Rational> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        v[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return PolyU(std::move(v));
}

std::pair<PolyU, PolyU> PolyU::divmod(const PolyU& a, const PolyU& b)
{
    if (b.is_zero())
        throw std::domain_error("PolyU::divmod: division by zero polynomial");
    PolyU rem = a;
    if (a.degree() < b.degree())
        return {PolyU(), rem};
    std::vector<Rational> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Rational(0));
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        long shift = rem.degree() - b.degree();
        Rational factor = rem.leading() / b.leading();
        q[static_cast<std::size_t>(shift)] = factor;
        rem = rem - b * PolyU::monomial(factor, static_cast<std::size_t>(shift));
    }
    return {PolyU(std::move(q)), rem};
}

PolyU PolyU::gcd(PolyU a, PolyU b)
{
    while (!b.is_zero()) {
        PolyU r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero())
        a = a.scaled(Rational(1) / a.leading()); // monic
    return a;
}

std::string PolyU::str() const
{
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (long i = degree(); i >= 0; --i) {
        const Rational& c = c_[static_cast<std::size_t>(i)];
        if (c == 0)
            continue;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0)
                os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (mag != 1 || i == 0)
            os << mag.str();
        if (i > 0) {
            if (mag != 1)
                os << "*";
            os << "u";
            if (i > 1)
                os << "^" << i;
        }
    }
    return os.str();
}

RationalU::RationalU(PolyU num, PolyU den) : num_(std::move(num)), den_(std::move(den))
{
    if (den_.is_zero())
        throw std::domain_error("RationalU: zero denominator");
    if (num_.is_zero()) {
        den_ = PolyU::constant(1);
        return;
    }
    PolyU g = PolyU::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = PolyU::divmod(num_, g).first;
        den_ = PolyU::divmod(den_, g).first;
    }
    Rational lead = den_.leading();
    if (lead != 1) {
        den_ = den_.scaled(Rational(1) / lead);
        num_ = num_.scaled(Rational(1) / lead);
    }
}

RationalU RationalU::from_laurent_poly(const std::map<long, Rational>& terms)
{
    // l^k = u^{-k}; clear negative u-powers by a common factor u^shift.
    long max_g1 = 0;
    for (const auto& [g1, c] : terms)
        if (c != 0)
            max_g1 = std::max(max_g1, g1);
    PolyU num;
    for (const auto& [g1, c] : terms) {
        if (c == 0)
            continue;
        num = num + PolyU::monomial(c, static_cast<std::size_t>(max_g1 - g1));
    }
    return RationalU(std::move(num), PolyU::monomial(1, static_cast<std::size_t>(max_g1)));
}

RationalU RationalU::operator-() const
{
    RationalU r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalU operator+(const RationalU& a, const RationalU& b)
{
    return RationalU(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalU operator-(const RationalU& a, const RationalU& b) { return a + (-b); }

RationalU operator*(const RationalU& a, const RationalU& b)
{
    return RationalU(a.num_ * b.num_, a.den_ * b.den_);
}

RationalU operator/(const RationalU& a, const RationalU& b) { return a * b.reciprocal(); }

RationalU RationalU::reciprocal() const
{
    if (is_zero())
        throw std::domain_error("RationalU::reciprocal: division by zero");
    return RationalU(den_, num_);
}

RationalU RationalU::derivative() const
{
    return RationalU(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalU RationalU::scaled(const Rational& s) const
{
    return RationalU(num_.scaled(s), den_);
}

std::string RationalU::str() const
{
    if (den_ == PolyU::constant(1))
        return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

long laurent_order(const RationalU& Q)
{
    if (Q.is_zero())
        throw std::domain_error("laurent_order: zero function");
    return Q.den().degree() - Q.num().degree();
}

TruncatedTransseries laurent_expand(const RationalU& Q, long M)
{
    if (Q.is_zero())
        throw std::domain_error("laurent_expand: zero function");
    // Write num(u) = u^dn * A(1/u), den(u) = u^dd * B(1/u); in v = l = 1/u the
    // function is v^{dd-dn} * A(v)/B(v) with B(0) = leading(den) != 0. The
    // series A/B is computed by the standard division recurrence.
    const long dn = Q.num().degree();
    const long dd = Q.den().degree();
    const long n0 = dd - dn;
    auto rev = [](const PolyU& p, long deg) {
        std::vector<Rational> v(static_cast<std::size_t>(deg) + 1, Rational(0));
        for (long i = 0; i <= deg; ++i)
            v[static_cast<std::size_t>(i)] = p.coeff(static_cast<std::size_t>(deg - i));
        return v;
    };
    std::vector<Rational> A = rev(Q.num(), dn);
    std::vector<Rational> B = rev(Q.den(), dd);
    std::vector<Rational> C(static_cast<std::size_t>(M), Rational(0));
    for (long k = 0; k < M; ++k) {
        Rational s = k < static_cast<long>(A.size()) ? A[static_cast<std::size_t>(k)]
                                                     : Rational(0);
        for (long j = 1; j <= k && j < static_cast<long>(B.size()); ++j)
            s -= B[static_cast<std::size_t>(j)] * C[static_cast<std::size_t>(k - j)];
        C[static_cast<std::size_t>(k)] = s / B[0];
    }
    TruncatedTransseries r(std::nullopt, M);
    for (long k = 0; k < M; ++k)
        r.accumulate(ExponentTriple(0, n0 + k, 0), C[static_cast<std::size_t>(k)]);
    r.normalize();
    return r;
}

} // namespace fatou
