#include "fatou/transseries.hpp"

#include <sstream>
#include <stdexcept>

namespace fatou {

std::string ExponentTriple::str() const
{
    std::ostringstream os;
    os << "(" << g0.str() << "," << g1 << "," << g2 << ")";
    return os.str();
}

TruncatedTransseries TruncatedTransseries::monomial(const Rational& c, const ExponentTriple& e)
{
    TruncatedTransseries t;
    if (c != 0)
        t.terms_.emplace(e, c);
    return t;
}

Rational TruncatedTransseries::coeff(const ExponentTriple& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::pair<ExponentTriple, Rational> TruncatedTransseries::leading_term() const
{
    if (terms_.empty())
        throw std::domain_error("leading_term: empty series has no leading term");
    return *terms_.begin();
}

void TruncatedTransseries::accumulate(const ExponentTriple& e, const Rational& c)
{
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

void TruncatedTransseries::normalize()
{
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0 || (x_cutoff_ && it->first.g0 > *x_cutoff_))
            it = terms_.erase(it);
        else
            ++it;
    }
    if (!ell_cutoff_)
        return;
    // Within each x-power keep at most M l-powers counted from the block's
    // leading l-exponent.
    auto it = terms_.begin();
    while (it != terms_.end()) {
        const Rational& g0 = it->first.g0;
        long lead_g1 = it->first.g1;
        while (it != terms_.end() && it->first.g0 == g0) {
            if (it->first.g1 - lead_g1 >= *ell_cutoff_)
                it = terms_.erase(it);
            else
                ++it;
        }
    }
}

namespace {

std::optional<Rational> min_cutoff(const std::optional<Rational>& a,
                                   const std::optional<Rational>& b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return std::min(*a, *b);
}

std::optional<long> min_cutoff(const std::optional<long>& a, const std::optional<long>& b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return std::min(*a, *b);
}

} // namespace

TruncatedTransseries TruncatedTransseries::with_cutoffs(std::optional<Rational> x_cutoff,
                                                        std::optional<long> ell_cutoff) const
{
    TruncatedTransseries r = *this;
    r.x_cutoff_ = min_cutoff(x_cutoff_, x_cutoff);
    r.ell_cutoff_ = min_cutoff(ell_cutoff_, ell_cutoff);
    r.normalize();
    return r;
}

TruncatedTransseries TruncatedTransseries::operator-() const
{
    TruncatedTransseries r = *this;
    for (auto& [e, c] : r.terms_)
        c = -c;
    return r;
}

TruncatedTransseries TruncatedTransseries::scaled(const Rational& c) const
{
    TruncatedTransseries r(x_cutoff_, ell_cutoff_);
    if (c == 0)
        return r;
    r.terms_ = terms_;
    for (auto& [e, v] : r.terms_)
        v *= c;
    return r;
}

TruncatedTransseries add(const TruncatedTransseries& a, const TruncatedTransseries& b)
{
    TruncatedTransseries r(min_cutoff(a.x_cutoff_, b.x_cutoff_),
                           min_cutoff(a.ell_cutoff_, b.ell_cutoff_));
    r.terms_ = a.terms_;
    for (const auto& [e, c] : b.terms_)
        r.accumulate(e, c);
    r.normalize();
    return r;
}

TruncatedTransseries mul(const TruncatedTransseries& a, const TruncatedTransseries& b)
{
    TruncatedTransseries r(min_cutoff(a.x_cutoff_, b.x_cutoff_),
                           min_cutoff(a.ell_cutoff_, b.ell_cutoff_));
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            ExponentTriple e = ea + eb;
            if (r.x_cutoff_ && e.g0 > *r.x_cutoff_)
                continue;
            r.accumulate(e, ca * cb);
        }
    r.normalize();
    return r;
}

TruncatedTransseries derive(const TruncatedTransseries& t)
{
    std::optional<Rational> xc = t.x_cutoff();
    if (xc)
        *xc -= 1;
    TruncatedTransseries r(xc, t.ell_cutoff());
    for (const auto& [e, c] : t.terms()) {
        if (e.g0 != 0)
            r.accumulate(ExponentTriple(e.g0 - 1, e.g1, e.g2), c * e.g0);
        if (e.g1 != 0)
            r.accumulate(ExponentTriple(e.g0 - 1, e.g1 + 1, e.g2), c * e.g1);
        if (e.g2 != 0)
            r.accumulate(ExponentTriple(e.g0 - 1, e.g1 + 1, e.g2 + 1), c * e.g2);
    }
    r.normalize();
    return r;
}

TruncatedTransseries antiderive_monomial(const Rational& alpha, long m, long M)
{
    TruncatedTransseries r;
    if (alpha == 1) {
        // Closed forms; the sign of the l2 case is fixed by the
        // differentiation rule d/dx log(-log x) = -x^{-1} l.
        if (m == -1)
            return TruncatedTransseries::monomial(-1, ExponentTriple(0, 0, -1));
        return TruncatedTransseries::monomial(Rational(-1) / Rational(m + 1),
                                              ExponentTriple(0, -m - 1, 0));
    }
    // Integration by parts:
    //   int x^{-a} l^{-m} dx = 1/(1-a) x^{1-a} l^{-m} + m/(1-a) int x^{-a} l^{-m+1} dx.
    // For m > 0 the recursion reaches m = 0 and stops; for m <= 0 it ascends in
    // l-powers forever and is cut after M terms.
    Rational coef = 1;
    long cur = m;
    for (long emitted = 0; emitted < M; ++emitted) {
        coef /= (1 - alpha);
        r.accumulate(ExponentTriple(1 - alpha, -cur, 0), coef);
        if (cur == 0)
            break;
        coef *= cur;
        cur -= 1;
    }
    r.normalize();
    return r;
}

TruncatedTransseries antiderive(const TruncatedTransseries& t, long M)
{
    std::optional<Rational> xc = t.x_cutoff();
    if (xc)
        *xc += 1;
    TruncatedTransseries r(xc, min_cutoff(t.ell_cutoff(), std::optional<long>(M)));
    for (const auto& [e, c] : t.terms()) {
        if (e.g2 != 0)
            throw std::domain_error("antiderive: monomial with l2 factor is not integrable "
                                    "by the integration-by-parts rule");
        TruncatedTransseries piece = antiderive_monomial(-e.g0, -e.g1, M);
        for (const auto& [pe, pc] : piece.terms())
            r.accumulate(pe, pc * c);
    }
    r.normalize();
    return r;
}

TruncatedTransseries inverse(const TruncatedTransseries& t)
{
    if (t.is_zero())
        throw std::domain_error("inverse: zero series");
    if (!t.x_cutoff() || !t.ell_cutoff())
        throw std::domain_error("inverse: finite cutoffs required");
    auto [le, lc] = t.leading_term();
    if (le.g2 != 0)
        throw std::domain_error("inverse: l2 monomials not supported");
    // t = lc x^e (1 + r) with ord(r) > 0; 1/t = (1/lc) x^{-e} sum (-r)^k.
    ExponentTriple neg(-le.g0, -le.g1, -le.g2);
    TruncatedTransseries lead_inv = TruncatedTransseries::monomial(Rational(1) / lc, neg)
                                        .with_cutoffs(t.x_cutoff(), t.ell_cutoff());
    TruncatedTransseries r = mul(t, lead_inv) - TruncatedTransseries::constant(1);
    if (!r.is_zero() && r.order() <= ExponentTriple(0, 0, 0))
        throw std::domain_error("inverse: remainder is not infinitesimal");
    TruncatedTransseries sum = TruncatedTransseries::constant(1).with_cutoffs(t.x_cutoff(),
                                                                             t.ell_cutoff());
    TruncatedTransseries pw = sum;
    const int kGuard = 10000;
    int k = 0;
    while (true) {
        pw = mul(pw, -r);
        if (pw.is_zero())
            break;
        sum = add(sum, pw);
        if (++k > kGuard)
            throw std::runtime_error("inverse: geometric expansion did not terminate "
                                     "under the given truncation");
    }
    return mul(lead_inv, sum);
}

TruncatedTransseries taylor_increment(const TruncatedTransseries& psi,
                                      const TruncatedTransseries& g, const Rational& N, long M)
{
    if (!g.is_zero() && g.order() <= ExponentTriple(1, 0, 0))
        throw std::domain_error("taylor_increment: ord(id - f) must exceed (1,0,0)");
    if (psi.is_zero() || g.is_zero())
        return TruncatedTransseries(N, M);
    const Rational p = psi.order().g0;
    const Rational a1 = g.order().g0;
    // Exactness window: the order-t coefficient of the k-th Taylor term needs
    // g through order t - p + k - (k-1)*a1 and psi through t - k*(a1-1).
    // Both bounds are tightest at k = 1.
    Rational W = N;
    if (g.x_cutoff())
        W = std::min(W, Rational(*g.x_cutoff() + p - 1));
    if (psi.x_cutoff())
        W = std::min(W, Rational(*psi.x_cutoff() + a1 - 1));
    TruncatedTransseries result(W, M);
    TruncatedTransseries dpsi = psi;
    dpsi.rebase_cutoffs(std::nullopt, std::nullopt);
    TruncatedTransseries gk = TruncatedTransseries::constant(1);
    TruncatedTransseries mg = -g;
    // Strip the input metadata on the working copies: min-cutoff propagation
    // would silently re-truncate the widened intermediates. Exactness through
    // W is guaranteed by the window computation above.
    mg.rebase_cutoffs(std::nullopt, std::nullopt);
    Rational kfac = 1;
    const int kGuard = 10000;
    for (int k = 1; k <= kGuard; ++k) {
        // Work with widened cutoffs: the product is truncated at W, which the
        // window above guarantees to be exact; generous l margins keep the
        // intermediate objects small without touching the claimed window M.
        dpsi = derive(dpsi); // psi^{(k)}
        dpsi.rebase_cutoffs(std::nullopt, M + 4 * k + 8);
        // Widen before multiplying: the min-cutoff rule of mul would otherwise
        // hold g^k at the previous iteration's cap and drop needed terms.
        gk.rebase_cutoffs(Rational(W - p + k), M + 4 * k + 8);
        gk = mul(gk, mg);
        kfac *= k;
        TruncatedTransseries term =
            mul(dpsi, gk).scaled(Rational(1) / kfac).with_cutoffs(W, M);
        result = add(result, term);
        if (p + k * (a1 - 1) > W)
            break; // every later term has x-order beyond the window
        if (term.is_zero() && a1 <= 1)
            break; // x-order stalls at a1 = 1; the l window is exhausted
        if (k == kGuard)
            throw std::runtime_error("taylor_increment: did not terminate under truncation");
    }
    return result;
}

std::string TruncatedTransseries::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0)
                os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool have_factor = false;
        auto put_factor = [&](const char* name, const Rational& exp) {
            if (exp == 0)
                return;
            if (have_factor)
                os << "*";
            os << name;
            if (exp != 1)
                os << "^" << exp.str();
            have_factor = true;
        };
        if (mag != 1) {
            os << mag.str();
            have_factor = true;
        }
        put_factor("x", e.g0);
        put_factor("l", Rational(e.g1));
        put_factor("l2", Rational(e.g2));
        if (!have_factor)
            os << "1";
    }
    return os.str();
}

} // namespace fatou
