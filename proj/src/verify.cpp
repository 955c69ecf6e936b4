#include "fatou/numeric.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace fatou {

Real ResidualReport::max_residual() const
{
    Real m(0);
    for (const Real& r : residual)
        m = (std::max)(m, r);
    return m;
}

std::string ResidualReport::to_csv() const
{
    std::ostringstream os;
    os << "x,f_x,psi_x,psi_f_x,residual\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        os << format_real(grid[i]) << "," << format_real(f_x[i]) << "," << format_real(psi_x[i])
           << "," << format_real(psi_f_x[i]) << "," << format_real(residual[i]) << "\n";
    return os.str();
}

std::string ResidualReport::to_json() const
{
    nlohmann::json doc;
    doc["points"] = grid.size();
    doc["max_residual"] = format_real(max_residual());
    doc["delta_slope"] = format_real(slope);
    doc["delta_intercept"] = format_real(intercept);
    doc["tol"] = format_real(tol);
    return doc.dump(2) + "\n";
}

ResidualReport verify_abel(const GermEvaluator& germ, const FatouExpansion& fexp,
                           const std::vector<Real>& grid, const Real& tol)
{
    ResidualReport rep;
    rep.tol = tol;
    std::vector<Real> deltas;
    for (const Real& x : grid) {
        if (!rep.grid.empty() && !(x < rep.grid.back()))
            throw std::invalid_argument("verify_abel: grid must decrease strictly toward 0");
        Real fx = germ.eval(x);
        Real px = fatou_value(germ, fexp, x, tol);
        Real pfx = fatou_value(germ, fexp, fx, tol);
        Real res = abs(pfx - px - 1);
        if (!(res < Real("1e100")))
            throw std::runtime_error("verify_abel: non-finite residual");
        rep.grid.push_back(x);
        rep.f_x.push_back(fx);
        rep.psi_x.push_back(px);
        rep.psi_f_x.push_back(pfx);
        rep.residual.push_back(res);
        // Decay of the truncated-expansion residual, for the slope fit.
        deltas.push_back(abs(delta_residual(germ, fexp, x, tol / 100, /*include_all=*/true)));
        rep.max_delta = (std::max)(rep.max_delta, deltas.back());
    }
    auto [slope, intercept] = loglog_fit(rep.grid, deltas);
    rep.slope = slope;
    rep.intercept = intercept;
    return rep;
}

} // namespace fatou
