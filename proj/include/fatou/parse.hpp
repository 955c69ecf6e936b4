#pragma once

#include "fatou/dulac.hpp"
#include "fatou/expr.hpp"
#include "fatou/transseries.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace fatou {

// Syntax error with a 0-based character position into the parsed text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error("syntax error at position " + std::to_string(pos) + ": " + what),
          pos_(pos)
    {
    }
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Grammar: tokens x, l (= -1/log x), l2 (= l of l), u (= l^-1 sugar), '^' with
// rational exponents p/q, '*', '+', '-', parentheses; coefficients are
// integers or fractions. Whitespace-insensitive. "0" parses to the empty
// series.
TruncatedTransseries parse_transseries(const std::string& text);

// Parse and validate a parabolic Dulac germ.
DulacGermSpec parse_dulac(const std::string& text);

// Canonical text (round-trips with parse_transseries).
std::string serialize(const TruncatedTransseries& t);

// Structured machine format: a header with cutoffs followed by one
// "term <coef> <g0> <g1> <g2>" record per monomial.
std::string serialize_machine(const TruncatedTransseries& t);
TruncatedTransseries parse_machine(const std::string& text);

// A .germ file: one transseries expression (or "exp-flow: <xi>" naming the
// germ as the time-one map of the vector field xi d/dx), plus an optional
// "# numeric: ..." trailer selecting the numeric evaluator source.
struct GermFile {
    // Exactly one of the two is engaged.
    std::optional<TruncatedTransseries> direct;    // the germ expansion itself
    std::optional<TruncatedTransseries> generator; // xi of an exp-flow germ

    enum class Numeric { none, closed_form, ode } numeric = Numeric::none;
    Expr numeric_expr; // closed form f(x), or xi(x) for Numeric::ode
};

GermFile parse_germ_file(const std::string& content);
GermFile load_germ_file(const std::string& path);

} // namespace fatou
