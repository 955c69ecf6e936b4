#include "fatou/solver.hpp"

#include "fatou/parse.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace fatou {

// ---------------------------------------------------------------------------
// BlockSeries

BlockSeries BlockSeries::one()
{
    BlockSeries b;
    b.blocks[Rational(0)] = RationalU(Rational(1));
    return b;
}

BlockSeries BlockSeries::from_series(const TruncatedTransseries& t)
{
    std::map<Rational, std::map<long, Rational>> groups;
    for (const auto& [e, c] : t.terms()) {
        if (e.g2 != 0)
            throw std::invalid_argument("BlockSeries: double logarithm present");
        groups[e.g0][e.g1] = c;
    }
    BlockSeries b;
    for (const auto& [beta, terms] : groups)
        b.blocks[beta] = RationalU::from_laurent_poly(terms);
    return b;
}

std::pair<Rational, RationalU> BlockSeries::leading() const
{
    if (blocks.empty())
        throw std::domain_error("empty block series has no leading block");
    return *blocks.begin();
}

void BlockSeries::truncate(const Rational& cap)
{
    for (auto it = blocks.begin(); it != blocks.end();) {
        if (it->first > cap || it->second.is_zero())
            it = blocks.erase(it);
        else
            ++it;
    }
}

TruncatedTransseries BlockSeries::to_series(long M) const
{
    TruncatedTransseries out;
    for (const auto& [beta, F] : blocks) {
        TruncatedTransseries shift = TruncatedTransseries::monomial(1, ExponentTriple(beta));
        out = out + mul(shift, laurent_expand(F, M));
    }
    return out;
}

BlockSeries bs_add(const BlockSeries& a, const BlockSeries& b)
{
    BlockSeries r = a;
    for (const auto& [beta, F] : b.blocks) {
        auto it = r.blocks.find(beta);
        if (it == r.blocks.end())
            r.blocks.emplace(beta, F);
        else {
            it->second = it->second + F;
            if (it->second.is_zero())
                r.blocks.erase(it);
        }
    }
    return r;
}

BlockSeries bs_sub(const BlockSeries& a, const BlockSeries& b)
{
    BlockSeries nb;
    for (const auto& [beta, F] : b.blocks)
        nb.blocks[beta] = -F;
    return bs_add(a, nb);
}

BlockSeries bs_mul(const BlockSeries& a, const BlockSeries& b, const std::optional<Rational>& cap)
{
    BlockSeries r;
    for (const auto& [ba, Fa] : a.blocks)
        for (const auto& [bb, Fb] : b.blocks) {
            Rational beta = ba + bb;
            if (cap && beta > *cap)
                continue;
            RationalU prod = Fa * Fb;
            auto it = r.blocks.find(beta);
            if (it == r.blocks.end())
                r.blocks.emplace(beta, std::move(prod));
            else
                it->second = it->second + prod;
        }
    for (auto it = r.blocks.begin(); it != r.blocks.end();)
        it = it->second.is_zero() ? r.blocks.erase(it) : std::next(it);
    return r;
}

BlockSeries bs_derive(const BlockSeries& a)
{
    // d/dx (x^a F(u)) = x^{a-1} (a F(u) - F'(u)) since u = -log x.
    BlockSeries r;
    for (const auto& [beta, F] : a.blocks) {
        RationalU d = F.scaled(beta) - F.derivative();
        if (!d.is_zero())
            r.blocks[beta - 1] = std::move(d);
    }
    return r;
}

namespace {

BlockSeries bs_scaled(const BlockSeries& a, const Rational& s)
{
    BlockSeries r;
    if (s == 0)
        return r;
    for (const auto& [beta, F] : a.blocks)
        r.blocks[beta] = F.scaled(s);
    return r;
}

// Build the integral block with generator (alpha_int, Q): expand the
// integrand x^{alpha_int-1} Laurent(Q) and antiderive termwise. The l2
// monomial (arising only from an x^{-1} l^1 integrand term) is stripped into
// the returned rho contribution.
std::pair<IntegralBlock, Rational> make_block(const Rational& alpha_int, const RationalU& Q,
                                              long M)
{
    Rational p = alpha_int - 1;
    TruncatedTransseries laurent = laurent_expand(Q, M);
    TruncatedTransseries integrand =
        mul(TruncatedTransseries::monomial(1, ExponentTriple(p)), laurent);

    Rational rho_contribution = 0;
    if (p == -1)
        rho_contribution = -laurent.coeff(ExponentTriple(0, 1, 0));

    TruncatedTransseries raw = antiderive(integrand, M);
    TruncatedTransseries expansion;
    for (const auto& [e, c] : raw.terms())
        if (e.g2 == 0)
            expansion.accumulate(e, c);
    expansion.rebase_cutoffs(std::nullopt, M);

    IntegralBlock blk;
    blk.beta = alpha_int;
    blk.alpha_int = alpha_int;
    blk.generator = Q;
    blk.expansion = expansion;
    bool neg_ell = false;
    for (const auto& [e, c] : expansion.terms())
        if (e.g1 < 0)
            neg_ell = true;
    if (alpha_int < 0 || (alpha_int == 0 && neg_ell))
        blk.kind = BlockKind::infinite;
    else if (expansion.is_zero() && rho_contribution != 0)
        blk.kind = BlockKind::ell2;
    else
        blk.kind = BlockKind::infinitesimal;
    return {std::move(blk), rho_contribution};
}

// id - f as an exact block series (the germ's negated tail).
BlockSeries germ_tail(const DulacGermSpec& f)
{
    BlockSeries g;
    for (const auto& blk : f.tail_negated())
        g.blocks[blk.alpha] = blk.poly;
    return g;
}

} // namespace

// ---------------------------------------------------------------------------
// Abel recursion

StepResult solve_block_step(const BlockSeries& delta, const DulacGermSpec& f, const Rational& N,
                            long M)
{
    Rational alpha1 = f.alpha1();
    if (!(alpha1 > 1))
        throw std::invalid_argument("solver requires ord(id - f) > 1 in x");

    auto [beta_rhs, R] = delta.leading();
    Rational alpha_int = beta_rhs - alpha1 + 1;
    if (alpha_int > N)
        throw std::runtime_error("RHS order exceeded truncation");

    RationalU Q = -(R / f.leading_p1());
    auto [block, rho_contribution] = make_block(alpha_int, Q, M);

    // Exact Taylor increment Psi(f) - Psi = sum_{k>=1} (1/k!) Psi^{(k)} (f-x)^k,
    // using only derivatives of Psi' (each a single rational block), so the
    // divergent l-expansion of Psi itself never enters the bookkeeping.
    // Keep RHS blocks one x-order past the stop threshold N + alpha1 - 1, so
    // the first unresolved block survives and its order can be reported.
    Rational cap = N + alpha1;
    BlockSeries mg = bs_scaled(germ_tail(f), -1); // f - x
    BlockSeries deriv;                            // Psi^{(k)}, starting at Psi'
    deriv.blocks[beta_rhs - alpha1] = Q;
    BlockSeries pw = mg; // (f - x)^k
    BlockSeries inc;
    Rational fact = 1;
    for (long k = 1;; ++k) {
        if (beta_rhs + Rational(k - 1) * (alpha1 - 1) > cap)
            break;
        fact *= k;
        inc = bs_add(inc, bs_scaled(bs_mul(deriv, pw, cap), Rational(1) / fact));
        Rational dmin = beta_rhs - alpha1 - k; // min x-order of Psi^{(k+1)}
        deriv = bs_derive(deriv);
        pw = bs_mul(pw, mg, cap - dmin);
    }

    StepResult res;
    res.block = std::move(block);
    res.rho_contribution = rho_contribution;
    res.delta = bs_sub(delta, inc);
    res.delta.truncate(cap);
    if (!res.delta.is_zero() && !(res.delta.leading().first > beta_rhs))
        throw std::logic_error("block step failed to cancel the leading RHS block");
    return res;
}

SupportLattice support_lattice(const DulacGermSpec& f)
{
    SupportLattice lat;
    Rational alpha1 = f.alpha1();
    std::set<Rational> gens;
    const auto& blocks = f.blocks();
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        if (blocks[i].alpha - alpha1 > 0)
            gens.insert(blocks[i].alpha - alpha1);
        if (blocks[i].alpha - 1 > 0)
            gens.insert(blocks[i].alpha - 1);
    }
    lat.generators.assign(gens.begin(), gens.end());
    return lat;
}

bool SupportLattice::contains(const Rational& t) const
{
    if (t == 0)
        return true;
    if (t < 0 || generators.empty())
        return false;
    Integer L = denominator(t);
    for (const auto& g : generators)
        L = lcm(L, denominator(g));
    Integer target_big = numerator(Rational(t * L));
    if (target_big > 1000000)
        throw std::runtime_error("support lattice check budget exceeded");
    long target = target_big.convert_to<long>();
    std::vector<long> coins;
    for (const auto& g : generators) {
        Integer c = numerator(Rational(g * L));
        if (c <= target)
            coins.push_back(c.convert_to<long>());
    }
    std::vector<char> reach(static_cast<std::size_t>(target) + 1, 0);
    reach[0] = 1;
    for (long v = 1; v <= target; ++v)
        for (long c : coins)
            if (v >= c && reach[v - c]) {
                reach[v] = 1;
                break;
            }
    return reach[target] != 0;
}

FatouExpansion formal_fatou(const DulacGermSpec& f, const Rational& N, long M, long max_blocks)
{
    Rational alpha1 = f.alpha1();
    if (!(alpha1 > 1))
        throw std::invalid_argument("solver requires ord(id - f) > 1 in x");

    FatouExpansion fe;
    fe.lattice = support_lattice(f);
    BlockSeries delta = BlockSeries::one();
    while (true) {
        if (delta.is_zero()) {
            fe.residual_order.reset();
            break;
        }
        auto [beta_rhs, R] = delta.leading();
        if (!fe.lattice.contains(beta_rhs))
            throw std::logic_error("RHS order outside the support lattice");
        fe.lattice.seen.insert(beta_rhs);
        if (beta_rhs - alpha1 + 1 > N) {
            fe.residual_order = ExponentTriple(beta_rhs, laurent_order(R), 0);
            break;
        }
        StepResult step = solve_block_step(delta, f, N, M);
        if (step.rho_contribution != 0) {
            if (fe.rho != 0)
                throw std::logic_error("second double-logarithm monomial produced");
            fe.rho = step.rho_contribution;
        }
        if (!fe.blocks.empty() && !(fe.blocks.back().beta < step.block.beta))
            throw std::logic_error("block orders not strictly increasing");
        fe.blocks.push_back(std::move(step.block));
        delta = std::move(step.delta);
        if (static_cast<long>(fe.blocks.size()) > max_blocks)
            throw std::runtime_error("did not terminate in budget");
    }

    // Infinite blocks form a prefix; r0 is its length.
    bool seen_small = false;
    long r0 = 0;
    for (const auto& b : fe.blocks) {
        if (b.kind == BlockKind::infinite) {
            if (seen_small)
                throw std::logic_error("infinite block after an infinitesimal one");
            ++r0;
        } else
            seen_small = true;
    }
    fe.r0 = r0;
    return fe;
}

TruncatedTransseries FatouExpansion::to_series(std::optional<Rational> x_cutoff, long M) const
{
    TruncatedTransseries out;
    for (const auto& b : blocks)
        out = out + b.expansion;
    if (rho != 0)
        out = out + TruncatedTransseries::monomial(rho, ExponentTriple(0, 0, -1));
    return out.with_cutoffs(std::move(x_cutoff), M);
}

// ---------------------------------------------------------------------------
// Flow cross-check operations

TruncatedTransseries lie_exp_time_one(const TruncatedTransseries& xi, const Rational& N, long M)
{
    if (xi.is_zero() || !(ExponentTriple(1, 0, 0) < xi.order()))
        throw std::invalid_argument("non-parabolic generator");
    // When ord_x(xi) > 1 every Lie term is a finite Laurent polynomial per
    // x-block, so only the x-cutoff is needed; at ord_x = 1 the x-order can
    // stall while the l-order climbs, so a widened l-window bounds the loop.
    std::optional<long> mwork;
    if (xi.order().g0 == 1)
        mwork = M + 8;
    TruncatedTransseries xiw = xi.with_cutoffs(N, mwork);
    TruncatedTransseries term = TruncatedTransseries::identity();
    TruncatedTransseries result = term;
    for (long k = 1; k <= 10000; ++k) {
        TruncatedTransseries d = derive(term);
        // The decremented x-cutoff of the derivative would needlessly tighten
        // the product (xi raises the order right back); drop its metadata.
        d.rebase_cutoffs(std::nullopt, mwork);
        term = mul(xiw, d).scaled(Rational(1) / k);
        term.rebase_cutoffs(N, mwork);
        if (term.is_zero())
            return result.with_cutoffs(N, M);
        result = result + term;
    }
    throw std::runtime_error("did not terminate in budget");
}

FatouExpansion fatou_of_generator(const TruncatedTransseries& xi, const Rational& N, long M)
{
    if (xi.is_zero())
        throw std::invalid_argument("zero generator");
    if (!(ExponentTriple(1, 0, 0) < xi.order()))
        throw std::invalid_argument("non-parabolic generator");
    Rational a = xi.order().g0;

    // Psi' = 1/xi; the inversion needs headroom of 2*ord_x(xi) beyond the
    // requested window, and the antiderivative raises the x-order by one.
    TruncatedTransseries xiw = xi.with_cutoffs(N + 2 * a + 2, M + 8);
    TruncatedTransseries psi_prime = inverse(xiw).with_cutoffs(N - 1, M + 8);

    std::map<Rational, std::map<long, Rational>> groups;
    for (const auto& [e, c] : psi_prime.terms())
        groups[e.g0][e.g1] = c;

    FatouExpansion fe;
    for (const auto& [p, terms] : groups) {
        RationalU Q = RationalU::from_laurent_poly(terms);
        auto [block, rho_contribution] = make_block(p + 1, Q, M);
        if (rho_contribution != 0) {
            if (fe.rho != 0)
                throw std::logic_error("second double-logarithm monomial produced");
            fe.rho = rho_contribution;
        }
        if (!(block.expansion.is_zero() && rho_contribution == 0))
            fe.blocks.push_back(std::move(block));
    }
    long r0 = 0;
    for (const auto& b : fe.blocks)
        if (b.kind == BlockKind::infinite)
            ++r0;
    fe.r0 = r0;
    return fe;
}

// ---------------------------------------------------------------------------
// Summary document

std::string fatou_summary_json(const FatouExpansion& fe)
{
    using nlohmann::json;
    auto poly_coeffs = [](const PolyU& p) {
        json arr = json::array();
        for (const auto& c : p.coeffs())
            arr.push_back(c.str());
        return arr;
    };
    json doc;
    doc["blocks"] = json::array();
    for (const auto& b : fe.blocks) {
        json jb;
        jb["beta"] = b.beta.str();
        jb["alpha_int"] = b.alpha_int.str();
        jb["kind"] = b.kind == BlockKind::infinite
                         ? "infinite"
                         : (b.kind == BlockKind::ell2 ? "ell2" : "infinitesimal");
        jb["generator"]["num"] = poly_coeffs(b.generator.num());
        jb["generator"]["den"] = poly_coeffs(b.generator.den());
        jb["expansion"] = b.expansion.str();
        doc["blocks"].push_back(std::move(jb));
    }
    doc["rho"] = fe.rho.str();
    doc["r0"] = fe.r0;
    doc["lattice_generators"] = json::array();
    for (const auto& g : fe.lattice.generators)
        doc["lattice_generators"].push_back(g.str());
    if (fe.residual_order)
        doc["residual_order"] = {fe.residual_order->g0.str(),
                                 std::to_string(fe.residual_order->g1),
                                 std::to_string(fe.residual_order->g2)};
    else
        doc["residual_order"] = nullptr;
    return doc.dump(2) + "\n";
}

} // namespace fatou
