#pragma once

#include "fatou/rational.hpp"
#include "fatou/real.hpp"

#include <memory>
#include <string>

namespace fatou {

// Closed-form expression sublanguage for numeric germ evaluators: rational
// functions of x and l (= -1/log x), exp, log, rational powers.
class Expr {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    Expr() = default;
    explicit Expr(NodePtr root) : root_(std::move(root)) {}
    bool empty() const { return !root_; }

    // Evaluate at a point x in (0,1); l is derived from x.
    Real eval(const Real& x) const;

    std::string str() const;

    static Expr number(const Rational& q);
    static Expr var_x();
    static Expr var_l();
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr neg(Expr a);
    static Expr pow(Expr base, const Rational& exponent);
    static Expr call(const std::string& fn, Expr arg); // exp | log

private:
    NodePtr root_;
};

// Parse the closed-form sublanguage. Throws ParseError (see parse.hpp) with a
// position on malformed input.
Expr parse_expr(const std::string& text);

} // namespace fatou
