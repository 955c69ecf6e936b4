#include "fatou/dulac.hpp"

#include <map>
#include <stdexcept>

namespace fatou {

DulacGermSpec DulacGermSpec::from_series(const TruncatedTransseries& series)
{
    if (series.is_zero())
        throw std::invalid_argument("not parabolic: empty series");
    for (const auto& [e, c] : series.terms())
        if (e.g2 != 0)
            throw std::invalid_argument("not a Dulac series: double logarithm present");

    // Group monomials by x-power into blocks (Laurent polynomials in l).
    std::map<Rational, std::map<long, Rational>> groups;
    for (const auto& [e, c] : series.terms())
        groups[e.g0][e.g1] = c;

    auto lead = groups.begin();
    if (lead->first != 1 || lead->second.size() != 1 || lead->second.count(0) == 0 ||
        lead->second.at(0) != 1)
        throw std::invalid_argument(
            "not parabolic: leading block must be exactly x (alpha_1 = 1, P_1 = 1)");
    if (groups.size() < 2)
        throw std::invalid_argument("not parabolic: no block beyond the identity");

    DulacGermSpec spec;
    spec.series_ = series;
    for (const auto& [alpha, terms] : groups)
        spec.blocks_.push_back({alpha, RationalU::from_laurent_poly(terms)});
    return spec;
}

std::vector<DulacBlock> DulacGermSpec::tail_negated() const
{
    std::vector<DulacBlock> g;
    for (std::size_t i = 1; i < blocks_.size(); ++i)
        g.push_back({blocks_[i].alpha, -blocks_[i].poly});
    return g;
}

Rational DulacGermSpec::alpha1() const
{
    return blocks_.at(1).alpha;
}

RationalU DulacGermSpec::leading_p1() const
{
    return -blocks_.at(1).poly;
}

} // namespace fatou
