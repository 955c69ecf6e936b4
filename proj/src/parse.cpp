#include "fatou/parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fatou {

namespace {

struct Lexer {
    enum class Tok { number, ident, caret, star, plus, minus, slash, lparen, rparen, end };

    explicit Lexer(const std::string& s) : text(s) { advance(); }

    const std::string& text;
    std::size_t pos = 0;      // position of the current token
    std::size_t cursor = 0;   // scan position
    Tok tok = Tok::end;
    std::string ident;
    Integer number;

    void advance()
    {
        while (cursor < text.size() && std::isspace(static_cast<unsigned char>(text[cursor])))
            ++cursor;
        pos = cursor;
        if (cursor >= text.size()) {
            tok = Tok::end;
            return;
        }
        char c = text[cursor];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = cursor;
            while (cursor < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[cursor])))
                ++cursor;
            number = Integer(text.substr(start, cursor - start));
            tok = Tok::number;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = cursor;
            while (cursor < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[cursor])) ||
                    text[cursor] == '_'))
                ++cursor;
            ident = text.substr(start, cursor - start);
            tok = Tok::ident;
            return;
        }
        ++cursor;
        switch (c) {
        case '^': tok = Tok::caret; return;
        case '*': tok = Tok::star; return;
        case '+': tok = Tok::plus; return;
        case '-': tok = Tok::minus; return;
        case '/': tok = Tok::slash; return;
        case '(': tok = Tok::lparen; return;
        case ')': tok = Tok::rparen; return;
        default: throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
    }
};

class TransseriesParser {
public:
    explicit TransseriesParser(const std::string& text) : lx_(text) {}

    TruncatedTransseries parse()
    {
        TruncatedTransseries t = expr();
        if (lx_.tok != Lexer::Tok::end)
            throw ParseError("trailing input", lx_.pos);
        return t;
    }

private:
    Lexer lx_;

    Rational read_unsigned_rational()
    {
        if (lx_.tok != Lexer::Tok::number)
            throw ParseError("expected number", lx_.pos);
        Integer num = lx_.number;
        lx_.advance();
        if (lx_.tok == Lexer::Tok::slash) {
            lx_.advance();
            if (lx_.tok != Lexer::Tok::number)
                throw ParseError("expected denominator", lx_.pos);
            Integer den = lx_.number;
            if (den == 0)
                throw ParseError("zero denominator", lx_.pos);
            lx_.advance();
            return Rational(num, den);
        }
        return Rational(num);
    }

    Rational read_exponent()
    {
        bool neg = false;
        if (lx_.tok == Lexer::Tok::minus) {
            neg = true;
            lx_.advance();
        }
        Rational q = read_unsigned_rational();
        return neg ? Rational(-q) : q;
    }

    TruncatedTransseries factor()
    {
        if (lx_.tok == Lexer::Tok::number)
            return TruncatedTransseries::constant(read_unsigned_rational());
        if (lx_.tok == Lexer::Tok::lparen) {
            lx_.advance();
            TruncatedTransseries inner = expr();
            if (lx_.tok != Lexer::Tok::rparen)
                throw ParseError("expected ')'", lx_.pos);
            lx_.advance();
            return inner;
        }
        if (lx_.tok != Lexer::Tok::ident)
            throw ParseError("expected coefficient, variable, or '('", lx_.pos);
        std::string name = lx_.ident;
        std::size_t namepos = lx_.pos;
        lx_.advance();
        Rational e(1);
        if (lx_.tok == Lexer::Tok::caret) {
            lx_.advance();
            e = read_exponent();
        }
        if (name == "x")
            return TruncatedTransseries::monomial(1, ExponentTriple(e, 0, 0));
        auto integral = [&](const Rational& q) {
            if (denominator(q) != 1)
                throw ParseError("non-integer exponent for a logarithmic variable", namepos);
            return numerator(q).convert_to<long>();
        };
        if (name == "l")
            return TruncatedTransseries::monomial(1, ExponentTriple(0, integral(e), 0));
        if (name == "u")
            return TruncatedTransseries::monomial(1, ExponentTriple(0, -integral(e), 0));
        if (name == "l2")
            return TruncatedTransseries::monomial(1, ExponentTriple(0, 0, integral(e)));
        if (name.size() > 1 && name[0] == 'l' &&
            std::isdigit(static_cast<unsigned char>(name[1])))
            throw ParseError("logarithm depth greater than 2 is not supported", namepos);
        throw ParseError("unknown symbol '" + name + "'", namepos);
    }

    TruncatedTransseries term()
    {
        TruncatedTransseries t = factor();
        while (lx_.tok == Lexer::Tok::star) {
            lx_.advance();
            t = mul(t, factor());
        }
        return t;
    }

    TruncatedTransseries expr()
    {
        bool neg = false;
        if (lx_.tok == Lexer::Tok::plus)
            lx_.advance();
        else if (lx_.tok == Lexer::Tok::minus) {
            neg = true;
            lx_.advance();
        }
        TruncatedTransseries t = term();
        if (neg)
            t = -t;
        while (lx_.tok == Lexer::Tok::plus || lx_.tok == Lexer::Tok::minus) {
            bool sub = lx_.tok == Lexer::Tok::minus;
            lx_.advance();
            TruncatedTransseries r = term();
            t = sub ? t - r : t + r;
        }
        return t;
    }
};

} // namespace

TruncatedTransseries parse_transseries(const std::string& text)
{
    return TransseriesParser(text).parse();
}

DulacGermSpec parse_dulac(const std::string& text)
{
    return DulacGermSpec::from_series(parse_transseries(text));
}

std::string serialize(const TruncatedTransseries& t)
{
    return t.str();
}

std::string serialize_machine(const TruncatedTransseries& t)
{
    std::ostringstream os;
    os << "transseries v1\n";
    os << "x_cutoff " << (t.x_cutoff() ? t.x_cutoff()->str() : "none") << "\n";
    os << "ell_cutoff " << (t.ell_cutoff() ? std::to_string(*t.ell_cutoff()) : "none") << "\n";
    for (const auto& [e, c] : t.terms())
        os << "term " << c.str() << " " << e.g0.str() << " " << e.g1 << " " << e.g2 << "\n";
    os << "end\n";
    return os.str();
}

TruncatedTransseries parse_machine(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "transseries v1")
        throw std::runtime_error("machine format: bad header");
    auto field = [&](const std::string& key) {
        std::string l;
        if (!std::getline(is, l) || l.rfind(key + " ", 0) != 0)
            throw std::runtime_error("machine format: expected " + key);
        return l.substr(key.size() + 1);
    };
    std::string xc = field("x_cutoff");
    std::string mc = field("ell_cutoff");
    TruncatedTransseries t(
        xc == "none" ? std::optional<Rational>() : std::optional<Rational>(Rational(xc)),
        mc == "none" ? std::optional<long>() : std::optional<long>(std::stol(mc)));
    while (std::getline(is, line)) {
        if (line == "end")
            return t.with_cutoffs(std::nullopt, std::nullopt); // normalizes
        std::istringstream ls(line);
        std::string tag, coef, g0;
        long g1, g2;
        if (!(ls >> tag >> coef >> g0 >> g1 >> g2) || tag != "term")
            throw std::runtime_error("machine format: bad record '" + line + "'");
        t.accumulate(ExponentTriple(Rational(g0), g1, g2), Rational(coef));
    }
    throw std::runtime_error("machine format: missing end marker");
}

namespace {

std::string strip(const std::string& s)
{
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

GermFile parse_germ_file(const std::string& content)
{
    std::istringstream is(content);
    std::string line, expression, numeric_text;
    bool have_numeric = false;
    while (std::getline(is, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            std::string comment = strip(line.substr(hash + 1));
            if (comment.rfind("numeric:", 0) == 0) {
                if (have_numeric)
                    throw std::runtime_error("germ file: multiple numeric trailers");
                numeric_text = strip(comment.substr(8));
                have_numeric = true;
            }
            line = line.substr(0, hash);
        }
        expression += line + " ";
    }
    expression = strip(expression);
    if (expression.empty())
        throw ParseError("germ file: empty expression", 0);

    GermFile g;
    if (expression.rfind("exp-flow:", 0) == 0)
        g.generator = parse_transseries(expression.substr(9));
    else
        g.direct = parse_transseries(expression);
    if (have_numeric) {
        if (numeric_text.rfind("ode:", 0) == 0) {
            g.numeric = GermFile::Numeric::ode;
            g.numeric_expr = parse_expr(strip(numeric_text.substr(4)));
        } else {
            g.numeric = GermFile::Numeric::closed_form;
            g.numeric_expr = parse_expr(numeric_text);
        }
    }
    return g;
}

GermFile load_germ_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open germ file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_germ_file(ss.str());
}

} // namespace fatou
