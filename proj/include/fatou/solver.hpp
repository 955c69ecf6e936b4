#pragma once

#include "fatou/dulac.hpp"
#include "fatou/polyu.hpp"
#include "fatou/transseries.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fatou {

// Exact block representation of a series: sum over x-orders beta of
// x^beta * F_beta(u), with F_beta a rational function of u = l^{-1}. The
// solver keeps its right-hand side in this form so that no truncation error
// accumulates across steps and denominators stay powers of the germ's
// leading polynomial.
struct BlockSeries {
    std::map<Rational, RationalU> blocks;

    static BlockSeries one();
    // Group a transseries by x-power; throws on l2 monomials.
    static BlockSeries from_series(const TruncatedTransseries& t);

    bool is_zero() const { return blocks.empty(); }
    // Leading (smallest-beta) block.
    std::pair<Rational, RationalU> leading() const;
    // Drop blocks with beta > cap and zero entries.
    void truncate(const Rational& cap);

    // Expand each block as an l-Laurent series (M terms per block) and sum.
    TruncatedTransseries to_series(long M) const;
};

BlockSeries bs_add(const BlockSeries& a, const BlockSeries& b);
BlockSeries bs_sub(const BlockSeries& a, const BlockSeries& b);
BlockSeries bs_mul(const BlockSeries& a, const BlockSeries& b,
                   const std::optional<Rational>& cap = std::nullopt);
// d/dx of sum x^a F(u), using d/dx (x^a F(u)) = x^{a-1} (a F(u) - F'(u)).
BlockSeries bs_derive(const BlockSeries& a);

enum class BlockKind { infinite, infinitesimal, ell2 };

// One integral block x^beta f(l) of the Fatou coordinate: beta is its
// x-order, the generator (alpha_int, Q) satisfies
//   d/dx (x^{alpha_int} f(l)) = x^{alpha_int - 1} * Laurent(Q),
// and expansion is the truncated l-series of f (l2 monomials stripped; the
// single rho*l2^{-1} term lives on FatouExpansion).
struct IntegralBlock {
    Rational beta;
    Rational alpha_int;
    RationalU generator;
    TruncatedTransseries expansion;
    BlockKind kind = BlockKind::infinitesimal;
};

// Support lattice R: nonnegative-integer combinations of the generators
// {alpha_i - alpha_1} and {alpha_i - 1} over the germ's tail exponents.
struct SupportLattice {
    std::vector<Rational> generators;
    std::set<Rational> seen;

    bool contains(const Rational& t) const;
};

struct FatouExpansion {
    std::vector<IntegralBlock> blocks;
    Rational rho = 0;
    long r0 = 0;
    SupportLattice lattice;
    // x-order (and l-order) of the unresolved right-hand side at truncation;
    // disengaged when the RHS vanished through x-order N + alpha_1 (in
    // particular when the recursion terminated exactly).
    std::optional<ExponentTriple> residual_order;

    // Flatten to a single truncated transseries (blocks + rho*l2^{-1}).
    TruncatedTransseries to_series(std::optional<Rational> x_cutoff, long M) const;
};

// One step of the block-by-block Abel recursion: extract the leading block
// x^beta R(u) of delta, set Psi' = -x^{beta-alpha_1} (R/P_1)(u), antiderive
// it into a new integral block, and subtract the block's exact Taylor
// increment Psi(f) - Psi from delta.
struct StepResult {
    IntegralBlock block;
    BlockSeries delta;
    Rational rho_contribution = 0;
};
StepResult solve_block_step(const BlockSeries& delta, const DulacGermSpec& f, const Rational& N,
                            long M);

// Full formal Fatou coordinate of a parabolic Dulac germ with ord(id-f) > 1,
// truncated at x-order N with M l-terms per block.
FatouExpansion formal_fatou(const DulacGermSpec& f, const Rational& N, long M,
                            long max_blocks = 500);

SupportLattice support_lattice(const DulacGermSpec& f);

// Time-one map exp(xi d/dx) . id of a parabolic vector field generator.
TruncatedTransseries lie_exp_time_one(const TruncatedTransseries& xi, const Rational& N, long M);

// Fatou coordinate of the flow of xi: blockwise antiderivative of 1/xi.
FatouExpansion fatou_of_generator(const TruncatedTransseries& xi, const Rational& N, long M);

// Deterministic JSON summary (blocks, rho, r0, lattice, residual order).
std::string fatou_summary_json(const FatouExpansion& fe);

} // namespace fatou
