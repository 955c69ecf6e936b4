#pragma once

#include "fatou/polyu.hpp"
#include "fatou/transseries.hpp"

#include <string>
#include <vector>

namespace fatou {

// One block x^alpha * P(u) of a Dulac germ expansion; P is a Laurent
// polynomial in u = l^{-1} stored as a rational function.
struct DulacBlock {
    Rational alpha;
    RationalU poly;
};

// Parabolic Dulac germ specification: f = x + sum_{i>=2} x^{alpha_i} P_i,
// with alpha_1 = 1 and P_1 identically 1 represented by the mandatory leading
// identity block.
class DulacGermSpec {
public:
    // Build from a truncated series; validates the parabolic invariants and
    // throws std::invalid_argument("not parabolic: ...") on violation.
    static DulacGermSpec from_series(const TruncatedTransseries& series);

    const TruncatedTransseries& series() const { return series_; }
    // All blocks including the leading identity block (alpha=1, P=1).
    const std::vector<DulacBlock>& blocks() const { return blocks_; }

    // g = id - f as blocks (the negated tail blocks); alpha1() below is the
    // paper's section-6 leading exponent ord(id - f) in x.
    std::vector<DulacBlock> tail_negated() const;
    Rational alpha1() const;
    // Leading polynomial P1(u) of id - f: g = x^{alpha1} P1(u) + ...
    RationalU leading_p1() const;

    std::string str() const { return series_.str(); }

private:
    TruncatedTransseries series_;
    std::vector<DulacBlock> blocks_;
};

} // namespace fatou
