#pragma once

#include "fatou/dulac.hpp"
#include "fatou/expr.hpp"
#include "fatou/real.hpp"
#include "fatou/solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fatou {

// Numerical access to the germ f itself: a closed-form expression, the
// time-one map of a vector field integrated on demand, or direct evaluation
// of a truncated series (proxy, accurate only up to its truncation order).
class GermEvaluator {
public:
    static GermEvaluator closed_form(Expr e);
    static GermEvaluator ode_flow(Expr xi, Real ode_tol);
    static GermEvaluator series_proxy(TruncatedTransseries series);

    Real eval(const Real& x) const;
    // Check 0 < f(x) < x by sampling (0, d]; throws std::domain_error.
    void check_domain(const Real& d, int samples = 16) const;

private:
    enum class Kind { closed, ode, series } kind_ = Kind::closed;
    Expr expr_;
    Real ode_tol_ = 0;
    TruncatedTransseries series_;
};

// Value of a truncated transseries at x (monomial-wise; requires x in (0,1),
// and x < 1/e when l2 monomials are present).
Real eval_series(const TruncatedTransseries& t, const Real& x);

// Integral section of one block (the definition of the block's sum):
//   integral_sum(y) = [ int_d^{e^{-1/y}} s^{alpha-1} Q(-log s) ds ] * e^{alpha/y},
// computed by adaptive Gauss-Kronrod quadrature after s = e^{-1/t}. The block
// contributes x^{alpha} * integral_sum(l(x)) to the Fatou coordinate.
Real integral_sum(const IntegralBlock& block, const Real& y, const Real& d, const Real& tol);

// The d = 0 vs d > 0 rule: d may be 0 exactly when the integrand is
// integrable at 0 (alpha_int > 0, or alpha_int = 0 with Laurent order > 1);
// otherwise a fixed d in (0,1) is used (default 1/e).
Real default_d(const IntegralBlock& block);

// Principal (divergent) part: blocks 1..r0 plus rho*log(-log x); with
// include_all also the infinitesimal blocks of the truncated expansion.
Real principal_part_value(const FatouExpansion& fexp, const Real& x, const Real& tol,
                          bool include_all = false);

// delta(x) = 1 - (Psi_trunc(f(x)) - Psi_trunc(x)), evaluated as one quadrature
// per block over [x, f(x)] so the additive constants drop out exactly.
Real delta_residual(const GermEvaluator& germ, const FatouExpansion& fexp, const Real& x,
                    const Real& tol, bool include_all = false);

// Orbit sum R(x) = -sum_{k>=0} delta(f^k(x)), stopped when the fitted tail
// bound |delta| <= C z^gamma, combined with the iterate-decay estimate,
// certifies the remainder below tol. alpha1 = ord(id - f).
Real infinitesimal_value(const GermEvaluator& germ, const std::function<Real(const Real&)>& delta,
                         const Real& x, const Real& tol, const Rational& alpha1);

// Psi(x) = principal part + orbit-sum infinitesimal part.
Real fatou_value(const GermEvaluator& germ, const FatouExpansion& fexp, const Real& x,
                 const Real& tol);

// Iterate-decay estimate f1^n(x) < x (1 + (n/2) x^{a-1})^{-1/(a-1)} for the
// model germ f1(z) = z - z^a, a = alpha_eps > 1.
bool orbit_bound_check(const Real& alpha_eps, const Real& x, long n);

// Time-t map of dz/dt = xi(z) by adaptive RKF78; t defaults to one.
Real ode_time_one_map(const Expr& xi, const Real& x, const Real& tol, const Real& t = Real(1));

// Verification report over a grid of x values.
struct ResidualReport {
    std::vector<Real> grid, f_x, psi_x, psi_f_x, residual;
    // Log-log fit of the truncated-expansion residual |delta(x)| ~ C x^slope,
    // and the largest |delta| seen (the fit is noise when this is at the
    // quadrature floor).
    Real slope = 0, intercept = 0, max_delta = 0;
    Real tol = 0;

    Real max_residual() const;
    std::string to_csv() const;  // header: x,f_x,psi_x,psi_f_x,residual
    std::string to_json() const; // summary with the slope fit
};

ResidualReport verify_abel(const GermEvaluator& germ, const FatouExpansion& fexp,
                           const std::vector<Real>& grid, const Real& tol);

// Least-squares slope/intercept of log|y| against log x (zero ys skipped).
std::pair<Real, Real> loglog_fit(const std::vector<Real>& xs, const std::vector<Real>& ys);

// Full-precision scientific-notation formatting for reports.
std::string format_real(const Real& v);

} // namespace fatou
