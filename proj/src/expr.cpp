#include "fatou/expr.hpp"

#include "fatou/parse.hpp"

#include <cctype>
#include <sstream>

namespace fatou {

struct Expr::Node {
    enum class Kind { num, var_x, var_l, add, sub, mul, div, neg, pow, call_exp, call_log };
    Kind kind;
    Rational value;    // num: the constant; pow: the exponent
    NodePtr a, b;
};

namespace {

using Node = Expr::Node;
using Kind = Node::Kind;

Expr::NodePtr make(Kind k, Rational v = Rational(0), Expr::NodePtr a = nullptr,
                   Expr::NodePtr b = nullptr)
{
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->value = std::move(v);
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Real eval_node(const Node& n, const Real& x, const Real& l)
{
    switch (n.kind) {
    case Kind::num:
        return rational_cast<Real>(n.value);
    case Kind::var_x:
        return x;
    case Kind::var_l:
        return l;
    case Kind::add:
        return eval_node(*n.a, x, l) + eval_node(*n.b, x, l);
    case Kind::sub:
        return eval_node(*n.a, x, l) - eval_node(*n.b, x, l);
    case Kind::mul:
        return eval_node(*n.a, x, l) * eval_node(*n.b, x, l);
    case Kind::div: {
        Real d = eval_node(*n.b, x, l);
        if (d == 0)
            throw std::domain_error("expression: division by zero");
        return eval_node(*n.a, x, l) / d;
    }
    case Kind::neg:
        return -eval_node(*n.a, x, l);
    case Kind::pow: {
        Real base = eval_node(*n.a, x, l);
        if (denominator(n.value) == 1) {
            long e = numerator(n.value).convert_to<long>();
            return pow(base, e);
        }
        if (base <= 0)
            throw std::domain_error("expression: fractional power of a non-positive base");
        return exp(rational_cast<Real>(n.value) * log(base));
    }
    case Kind::call_exp:
        return exp(eval_node(*n.a, x, l));
    case Kind::call_log: {
        Real v = eval_node(*n.a, x, l);
        if (v <= 0)
            throw std::domain_error("expression: log of a non-positive value");
        return log(v);
    }
    }
    throw std::logic_error("expression: bad node");
}

std::string str_node(const Node& n)
{
    switch (n.kind) {
    case Kind::num:
        return n.value.str();
    case Kind::var_x:
        return "x";
    case Kind::var_l:
        return "l";
    case Kind::add:
        return "(" + str_node(*n.a) + " + " + str_node(*n.b) + ")";
    case Kind::sub:
        return "(" + str_node(*n.a) + " - " + str_node(*n.b) + ")";
    case Kind::mul:
        return "(" + str_node(*n.a) + "*" + str_node(*n.b) + ")";
    case Kind::div:
        return "(" + str_node(*n.a) + "/" + str_node(*n.b) + ")";
    case Kind::neg:
        return "(-" + str_node(*n.a) + ")";
    case Kind::pow:
        return "(" + str_node(*n.a) + "^" + n.value.str() + ")";
    case Kind::call_exp:
        return "exp(" + str_node(*n.a) + ")";
    case Kind::call_log:
        return "log(" + str_node(*n.a) + ")";
    }
    return "?";
}

} // namespace

Real Expr::eval(const Real& x) const
{
    if (!root_)
        throw std::logic_error("expression: empty");
    if (!(x > 0) || !(x < 1))
        throw std::domain_error("expression: argument must lie in (0,1)");
    Real l = Real(-1) / log(x);
    return eval_node(*root_, x, l);
}

std::string Expr::str() const
{
    return root_ ? str_node(*root_) : "<empty>";
}

Expr Expr::number(const Rational& q) { return Expr(make(Kind::num, q)); }
Expr Expr::var_x() { return Expr(make(Kind::var_x)); }
Expr Expr::var_l() { return Expr(make(Kind::var_l)); }
Expr Expr::add(Expr a, Expr b) { return Expr(make(Kind::add, 0, a.root_, b.root_)); }
Expr Expr::sub(Expr a, Expr b) { return Expr(make(Kind::sub, 0, a.root_, b.root_)); }
Expr Expr::mul(Expr a, Expr b) { return Expr(make(Kind::mul, 0, a.root_, b.root_)); }
Expr Expr::div(Expr a, Expr b) { return Expr(make(Kind::div, 0, a.root_, b.root_)); }
Expr Expr::neg(Expr a) { return Expr(make(Kind::neg, 0, a.root_)); }
Expr Expr::pow(Expr base, const Rational& e) { return Expr(make(Kind::pow, e, base.root_)); }

Expr Expr::call(const std::string& fn, Expr arg)
{
    if (fn == "exp")
        return Expr(make(Kind::call_exp, 0, arg.root_));
    if (fn == "log")
        return Expr(make(Kind::call_log, 0, arg.root_));
    throw std::invalid_argument("expression: unknown function " + fn);
}

namespace {

// Recursive-descent parser for the closed-form sublanguage.
class ExprParser {
public:
    explicit ExprParser(const std::string& text) : text_(text) { skip(); }

    Expr parse()
    {
        Expr e = expr();
        if (pos_ < text_.size())
            throw ParseError("trailing input", pos_);
        return e;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool eat(char c)
    {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            skip();
            return true;
        }
        return false;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    Integer read_integer()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start)
            throw ParseError("expected number", start);
        Integer v(text_.substr(start, pos_ - start));
        skip();
        return v;
    }

    // Exponent literal: an integer, or a parenthesized fraction like (1/2).
    // A bare p/q is NOT consumed here so that x^2/log(x) divides as expected.
    Rational read_rational_literal()
    {
        bool neg = eat('-');
        bool paren = eat('(');
        if (paren && !neg)
            neg = eat('-');
        Integer num = read_integer();
        Rational q(num);
        if (paren && eat('/')) {
            Integer den = read_integer();
            if (den == 0)
                throw ParseError("zero denominator", pos_);
            q = Rational(num, den);
        }
        if (paren && !eat(')'))
            throw ParseError("expected ')'", pos_);
        return neg ? Rational(-q) : q;
    }

    Expr atom()
    {
        if (eat('(')) {
            Expr e = expr();
            if (!eat(')'))
                throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            Integer v = read_integer();
            return Expr::number(Rational(v));
        }
        if (std::isalpha(static_cast<unsigned char>(peek()))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isalnum(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            skip();
            if (name == "x")
                return Expr::var_x();
            if (name == "l")
                return Expr::var_l();
            if (name == "exp" || name == "log") {
                if (!eat('('))
                    throw ParseError("expected '(' after " + name, pos_);
                Expr arg = expr();
                if (!eat(')'))
                    throw ParseError("expected ')'", pos_);
                return Expr::call(name, arg);
            }
            throw ParseError("unknown symbol '" + name + "'", start);
        }
        throw ParseError("expected expression", pos_);
    }

    Expr power()
    {
        Expr base = atom();
        if (eat('^'))
            return Expr::pow(base, read_rational_literal());
        return base;
    }

    Expr unary()
    {
        if (eat('-'))
            return Expr::neg(unary());
        return power();
    }

    Expr term()
    {
        Expr e = unary();
        while (true) {
            if (eat('*'))
                e = Expr::mul(e, unary());
            else if (eat('/'))
                e = Expr::div(e, unary());
            else
                return e;
        }
    }

    Expr expr()
    {
        Expr e = term();
        while (true) {
            if (eat('+'))
                e = Expr::add(e, term());
            else if (eat('-'))
                e = Expr::sub(e, term());
            else
                return e;
        }
    }
};

} // namespace

Expr parse_expr(const std::string& text)
{
    return ExprParser(text).parse();
}

} // namespace fatou
