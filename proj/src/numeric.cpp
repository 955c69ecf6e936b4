#include "fatou/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace boost::numeric::odeint {
template <> struct vector_space_norm_inf<fatou::Real> {
    typedef fatou::Real result_type;
    fatou::Real operator()(const fatou::Real& x) const { return abs(x); }
};
} // namespace boost::numeric::odeint

namespace fatou {

Real eval_ell(const Real& x, int k)
{
    if (k == 0)
        return x;
    if (k != 1 && k != 2)
        throw std::domain_error("eval_ell: depth must be 0, 1, or 2");
    if (!(x > 0))
        throw std::domain_error("eval_ell: argument must be positive");
    if (!(x < 1))
        throw std::domain_error("eval_ell: argument must be below 1");
    Real l1 = Real(-1) / log(x);
    if (k == 1)
        return l1;
    if (!(l1 < 1))
        throw std::domain_error("eval_ell: depth-2 requires x < 1/e");
    return Real(-1) / log(l1);
}

Real eval_series(const TruncatedTransseries& t, const Real& x)
{
    if (!(x > 0) || !(x < 1))
        throw std::domain_error("eval_series: argument must lie in (0,1)");
    Real lx = log(x);
    Real l1 = Real(-1) / lx;
    Real acc(0);
    for (const auto& [e, c] : t.terms()) {
        Real term = rational_cast<Real>(c) * exp(rational_cast<Real>(e.g0) * lx);
        if (e.g1 != 0)
            term *= pow(l1, static_cast<int>(e.g1));
        if (e.g2 != 0)
            term *= pow(eval_ell(x, 2), static_cast<int>(e.g2));
        acc += term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// GermEvaluator

GermEvaluator GermEvaluator::closed_form(Expr e)
{
    GermEvaluator g;
    g.kind_ = Kind::closed;
    g.expr_ = std::move(e);
    return g;
}

GermEvaluator GermEvaluator::ode_flow(Expr xi, Real ode_tol)
{
    GermEvaluator g;
    g.kind_ = Kind::ode;
    g.expr_ = std::move(xi);
    g.ode_tol_ = std::move(ode_tol);
    return g;
}

GermEvaluator GermEvaluator::series_proxy(TruncatedTransseries series)
{
    GermEvaluator g;
    g.kind_ = Kind::series;
    g.series_ = std::move(series);
    return g;
}

Real GermEvaluator::eval(const Real& x) const
{
    switch (kind_) {
    case Kind::closed:
        return expr_.eval(x);
    case Kind::ode:
        return ode_time_one_map(expr_, x, ode_tol_);
    case Kind::series:
        return eval_series(series_, x);
    }
    throw std::logic_error("GermEvaluator: bad kind");
}

void GermEvaluator::check_domain(const Real& d, int samples) const
{
    for (int i = 1; i <= samples; ++i) {
        Real x = d * Real(i) / samples;
        Real fx = eval(x);
        if (!(fx > 0) || !(fx < x))
            throw std::domain_error("germ violates 0 < f(x) < x at x = " + format_real(x));
    }
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

// Integrand of the block integral after s = e^{-1/t}:
//   e^{-alpha/t} Q(1/t) / t^2 .
Real block_integrand(const IntegralBlock& block, const Real& alpha, const Real& t)
{
    if (t == 0)
        return Real(0); // only reachable when the d=0 rule holds
    return exp(-alpha / t) * block.generator.eval<Real>(Real(1) / t) / (t * t);
}

// boost's adaptive Gauss-Kronrod silently stops subdividing when instantiated
// on the runtime-precision mpfr type (its node tables and termination
// constants assume a compile-time precision), so the quadrature runs in a
// fixed-precision type wide enough for the working precision, converting at
// the interval and result boundaries. The integrand itself still evaluates in
// the working precision.
template <unsigned Digits, typename F>
Real gk_fixed(const F& f, const Real& a, const Real& b, const Real& tol, const char* who)
{
    using Q = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits>,
                                            boost::multiprecision::et_off>;
    auto qf = [&](const Q& t) { return Q(f(Real(t))); };
    Q error(0), l1(0);
    // Depth 25: the section integrands develop steep boundary layers (the
    // integrand spans dozens of decades as y decreases) that depth 15 cannot
    // resolve to tight tolerances.
    Q v = boost::math::quadrature::gauss_kronrod<Q, 15>::integrate(qf, Q(a), Q(b), 25, Q(tol),
                                                                   &error, &l1);
    // The reported estimate is absolute and conservative; the raw integrand
    // can be huge before the section normalization, so judge it relative to
    // the integral's scale.
    if (!(error <= Q(tol) * 100 * (std::max)(Q(1), l1)))
        throw std::runtime_error(std::string(who) + ": quadrature failed to reach tolerance");
    return Real(v);
}

// Orientation-safe adaptive quadrature with an error check.
template <typename F>
Real gk_integrate(const F& f, Real a, Real b, const Real& tol, const char* who)
{
    if (a == b)
        return Real(0);
    Real sign(1);
    if (a > b) {
        std::swap(a, b);
        sign = -1;
    }
    const unsigned digits = working_digits();
    Real v = digits <= 30    ? gk_fixed<50>(f, a, b, tol, who)
             : digits <= 80  ? gk_fixed<100>(f, a, b, tol, who)
             : digits <= 180 ? gk_fixed<200>(f, a, b, tol, who)
                             : gk_fixed<400>(f, a, b, tol, who);
    return sign * v;
}

// Scan for real zeros of den(Q)(1/t) on [a, b] by sign changes.
void scan_for_poles(const IntegralBlock& block, const Real& a, const Real& b)
{
    const PolyU& den = block.generator.den();
    if (den.degree() < 1)
        return;
    const int n = 128;
    Real prev = 0;
    bool have_prev = false;
    for (int i = 0; i <= n; ++i) {
        Real t = a + (b - a) * Real(i) / n;
        if (t <= 0)
            continue;
        Real v = den.eval<Real>(Real(1) / t);
        if (v == 0 || (have_prev && ((prev < 0 && v > 0) || (prev > 0 && v < 0))))
            throw std::runtime_error("generator pole in domain near t = " + format_real(t));
        prev = v;
        have_prev = true;
    }
}

} // namespace

Real default_d(const IntegralBlock& block)
{
    if (block.alpha_int > 0)
        return Real(0);
    if (block.alpha_int == 0 && laurent_order(block.generator) > 1)
        return Real(0);
    return exp(Real(-1));
}

Real integral_sum(const IntegralBlock& block, const Real& y, const Real& d, const Real& tol)
{
    if (!(y > 0) || !(y < 1))
        throw std::domain_error("integral_sum: y must lie in (0,1)");
    Real alpha = rational_cast<Real>(block.alpha_int);
    if (d == 0 && !(block.alpha_int > 0) &&
        !(block.alpha_int == 0 && laurent_order(block.generator) > 1))
        throw std::domain_error("integral_sum: d = 0 requires an integrand integrable at 0");
    Real t0 = d == 0 ? Real(0) : eval_ell(d, 1);
    scan_for_poles(block, t0 == 0 ? y / 256 : (std::min)(t0, y), (std::max)(t0, y));
    Real value = gk_integrate([&](const Real& t) { return block_integrand(block, alpha, t); },
                              t0, y, tol, "integral_sum");
    return value * exp(alpha / y);
}

namespace {

// The (unique) alpha_int = 0 block's generator still contains the Laurent l^1
// component whose antiderivative is the rho*l2^{-1} term. The numeric layer
// accounts for rho separately (rho * log(-log x)), so that component must be
// removed before integrating the block, or it would be counted twice.
IntegralBlock without_rho_piece(const IntegralBlock& b, const Rational& rho)
{
    if (b.alpha_int != 0 || rho == 0)
        return b;
    IntegralBlock r = b;
    r.generator = b.generator + RationalU(PolyU::constant(rho), PolyU::u()); // Q - c/u, c = -rho
    return r;
}

} // namespace

Real principal_part_value(const FatouExpansion& fexp, const Real& x, const Real& tol,
                          bool include_all)
{
    Real acc(0);
    Real y = eval_ell(x, 1);
    long n = include_all ? static_cast<long>(fexp.blocks.size()) : fexp.r0;
    Real share = n > 0 ? tol / n : tol;
    for (long i = 0; i < n; ++i) {
        IntegralBlock b = without_rho_piece(fexp.blocks[static_cast<std::size_t>(i)], fexp.rho);
        Real alpha = rational_cast<Real>(b.alpha_int);
        acc += exp(-alpha / y) * integral_sum(b, y, default_d(b), share);
    }
    if (fexp.rho != 0)
        acc += rational_cast<Real>(fexp.rho) * log(-log(x));
    return acc;
}

Real delta_residual(const GermEvaluator& germ, const FatouExpansion& fexp, const Real& x,
                    const Real& tol, bool include_all)
{
    Real fx = germ.eval(x);
    if (!(fx > 0) || !(fx < x))
        throw std::domain_error("delta_residual: germ left the domain 0 < f(x) < x");
    Real ya = eval_ell(x, 1);
    Real yb = eval_ell(fx, 1);
    long n = include_all ? static_cast<long>(fexp.blocks.size()) : fexp.r0;
    Real share = n > 0 ? tol / (2 * n) : tol;
    Real diff(0);
    for (long i = 0; i < n; ++i) {
        IntegralBlock b = without_rho_piece(fexp.blocks[static_cast<std::size_t>(i)], fexp.rho);
        Real alpha = rational_cast<Real>(b.alpha_int);
        // One quadrature of the block integrand over [l(f(x)), l(x)]; the
        // lower-limit constant cancels between the two endpoints.
        scan_for_poles(b, yb, ya);
        Real v = gk_integrate([&](const Real& t) { return block_integrand(b, alpha, t); }, yb,
                              ya, share, "delta_residual");
        diff -= v; // int_x^{f(x)} = -int_{l(f(x))}^{l(x)} in t
    }
    if (fexp.rho != 0)
        diff += rational_cast<Real>(fexp.rho) * (log(-log(fx)) - log(-log(x)));
    return Real(1) - diff;
}

// ---------------------------------------------------------------------------
// Orbit sum

Real infinitesimal_value(const GermEvaluator& germ, const std::function<Real(const Real&)>& delta,
                         const Real& x, const Real& tol, const Rational& alpha1)
{
    Real a1 = rational_cast<Real>(alpha1 - 1);
    Real sum(0);
    Real z = x;
    Real max_seen(0);
    std::vector<Real> zs, ds;
    const long max_iter = 2000000;
    for (long k = 0; k < max_iter; ++k) {
        Real dz = delta(z);
        sum -= dz;
        zs.push_back(z);
        ds.push_back(abs(dz));
        max_seen = (std::max)(max_seen, Real(abs(dz)));

        bool check_now = k >= 12 && (k < 256 || k % 64 == 0);
        if (check_now) {
            // delta identically zero (up to quadrature noise): every observed
            // term is negligible, so the sum has converged.
            if (max_seen < tol / 1000)
                return sum;

            // Fit |delta| <= C z^gamma on the observed orbit and bound the
            // tail with the iterate-decay estimate
            //   sum_{j>=0} |delta(f^j(z))| <= C z^gamma (1 + 2 z^-a / (gamma/a - 1)),
            // a = alpha1 - 1 + eps, eps = (gamma - (alpha1-1))/4.
            std::size_t window = std::min<std::size_t>(zs.size(), 40);
            std::vector<Real> fz(zs.end() - static_cast<long>(window), zs.end());
            std::vector<Real> fd(ds.end() - static_cast<long>(window), ds.end());
            // Terms decayed below the quadrature noise floor: the remaining
            // orbit contributes nothing resolvable; stop here.
            Real recent(0);
            for (const Real& v : fd)
                recent = (std::max)(recent, v);
            if (recent < tol / 1000)
                return sum;
            auto [gamma, logc] = loglog_fit(fz, fd);
            (void)logc;
            if (gamma > a1) {
                Real eps = (gamma - a1) / 4;
                Real a = a1 + eps;
                Real C = 0;
                for (std::size_t i = 0; i < fz.size(); ++i)
                    C = (std::max)(C, Real(fd[i] / pow(fz[i], gamma)));
                C *= 2; // safety factor on the fitted constant
                Real tail = C * pow(z, gamma) * (1 + 2 * pow(z, -a) / (gamma / a - 1));
                if (tail < tol)
                    return sum;
            } else if (k > 4000) {
                throw std::runtime_error("tail bound inapplicable: fitted decay "
                                         "exponent does not exceed alpha_1 - 1");
            }
        }

        Real next = germ.eval(z);
        if (!(next > 0) || !(next < z))
            throw std::runtime_error("orbit left domain");
        z = next;
    }
    throw std::runtime_error("infinitesimal_value: orbit sum did not converge in budget");
}

Real fatou_value(const GermEvaluator& germ, const FatouExpansion& fexp, const Real& x,
                 const Real& tol)
{
    // The full truncated expansion is evaluated by quadrature and only the
    // tiny residual is orbit-summed, so the sum needs few iterations.
    Rational alpha1 = fexp.blocks.empty() ? Rational(2) : 1 - fexp.blocks.front().beta;
    Real quad_tol = tol / 10000;
    auto delta = [&](const Real& z) {
        return delta_residual(germ, fexp, z, quad_tol, /*include_all=*/true);
    };
    return principal_part_value(fexp, x, quad_tol, /*include_all=*/true) +
           infinitesimal_value(germ, delta, x, tol / 2, alpha1);
}

bool orbit_bound_check(const Real& alpha_eps, const Real& x, long n)
{
    Real z = x;
    for (long k = 0; k < n; ++k)
        z = z - pow(z, alpha_eps);
    Real a = alpha_eps - 1;
    Real bound = x * pow(1 + Real(n) / 2 * pow(x, a), Real(-1) / a);
    return z < bound;
}

Real ode_time_one_map(const Expr& xi, const Real& x, const Real& tol, const Real& t)
{
    namespace od = boost::numeric::odeint;
    using stepper =
        od::runge_kutta_fehlberg78<Real, Real, Real, Real, od::vector_space_algebra>;
    Real z = x;
    auto rhs = [&](const Real& state, Real& dzdt, const Real&) { dzdt = xi.eval(state); };
    try {
        od::integrate_adaptive(od::make_controlled<stepper>(tol, tol), rhs, z, Real(0), t,
                               t / 64);
    } catch (const std::domain_error&) {
        throw std::runtime_error("ode_time_one_map: step-size underflow near singular field");
    }
    return z;
}

// ---------------------------------------------------------------------------
// Helpers

std::pair<Real, Real> loglog_fit(const std::vector<Real>& xs, const std::vector<Real>& ys)
{
    Real sx(0), sy(0), sxx(0), sxy(0);
    long n = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(ys[i] > 0) || !(xs[i] > 0))
            continue;
        Real lx = log(xs[i]), ly = log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2)
        return {Real(0), Real(0)};
    Real den = n * sxx - sx * sx;
    if (den == 0)
        return {Real(0), Real(0)};
    Real slope = (n * sxy - sx * sy) / den;
    Real intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

std::string format_real(const Real& v)
{
    return v.str(static_cast<std::streamsize>(working_digits()), std::ios_base::scientific);
}

} // namespace fatou
