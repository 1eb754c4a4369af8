// Expression input: one state symbol, at most one parameter symbol,
// operators + - * ^ with explicit multiplication only. A parsed tree is
// expanded over exact rationals and grouped by parameter power into the pair
// (f, g) with meaning f(x) + p*g(x).
#pragma once

#include <bifurcus/polynomial.hpp>

#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bifurcus::expr {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;  // byte offset into the input text
};

struct ParameterNotAffine : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoParameter : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotPolynomialInState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExprAst {
    enum class Kind { number, state, parameter, negate, add, subtract, multiply, power };

    Kind kind;
    Rational value;          // number nodes
    long long exponent = 0;  // power nodes
    std::unique_ptr<ExprAst> lhs, rhs;  // negate uses lhs only

    Rational evaluate(const Rational& x, const Rational& p) const {
        switch (kind) {
            case Kind::number: return value;
            case Kind::state: return x;
            case Kind::parameter: return p;
            case Kind::negate: return -lhs->evaluate(x, p);
            case Kind::add: return lhs->evaluate(x, p) + rhs->evaluate(x, p);
            case Kind::subtract: return lhs->evaluate(x, p) - rhs->evaluate(x, p);
            case Kind::multiply: return lhs->evaluate(x, p) * rhs->evaluate(x, p);
            case Kind::power: {
                Rational base = lhs->evaluate(x, p), acc(1);
                for (long long i = 0; i < exponent; ++i) acc *= base;
                return acc;
            }
        }
        throw std::logic_error("unreachable");
    }
};

using AstPtr = std::unique_ptr<ExprAst>;

struct ParamAffineSystem {
    std::string state;  // state symbol name
    std::string param;  // parameter symbol name
    Polynomial f;       // parameter-free part
    Polynomial g;       // coefficient of the parameter; never zero
};

namespace detail {

struct Token {
    enum class Kind { number, identifier, plus, minus, star, caret, lparen, rparen, end };
    Kind kind;
    std::size_t position;
    std::string text;
};

inline std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            bool seen_dot = false;
            while (i < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
                if (text[i] == '.') {
                    if (seen_dot) throw ParseError("malformed number", i);
                    seen_dot = true;
                }
                ++i;
            }
            out.push_back({Token::Kind::number, start, text.substr(start, i - start)});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                ++i;
            out.push_back({Token::Kind::identifier, start, text.substr(start, i - start)});
            continue;
        }
        Token::Kind kind;
        switch (c) {
            case '+': kind = Token::Kind::plus; break;
            case '-': kind = Token::Kind::minus; break;
            case '*': kind = Token::Kind::star; break;
            case '^': kind = Token::Kind::caret; break;
            case '(': kind = Token::Kind::lparen; break;
            case ')': kind = Token::Kind::rparen; break;
            case '/': throw ParseError("division is not supported", i);
            default: throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        out.push_back({kind, start, std::string(1, c)});
        ++i;
    }
    out.push_back({Token::Kind::end, text.size(), ""});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string state, std::string param)
        : tokens_(std::move(tokens)), state_(std::move(state)), param_(std::move(param)) {}

    AstPtr run() {
        AstPtr root = parse_sum();
        if (peek().kind != Token::Kind::end)
            throw ParseError("unexpected '" + peek().text + "', expected operator or end",
                             peek().position);
        return root;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token advance() { return tokens_[pos_++]; }
    bool accept(Token::Kind k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }

    static AstPtr node(ExprAst::Kind kind, AstPtr lhs = nullptr, AstPtr rhs = nullptr) {
        auto n = std::make_unique<ExprAst>();
        n->kind = kind;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    AstPtr parse_sum() {
        AstPtr lhs = parse_product();
        for (;;) {
            if (accept(Token::Kind::plus))
                lhs = node(ExprAst::Kind::add, std::move(lhs), parse_product());
            else if (accept(Token::Kind::minus))
                lhs = node(ExprAst::Kind::subtract, std::move(lhs), parse_product());
            else
                return lhs;
        }
    }

    AstPtr parse_product() {
        AstPtr lhs = parse_factor();
        while (accept(Token::Kind::star))
            lhs = node(ExprAst::Kind::multiply, std::move(lhs), parse_factor());
        return lhs;
    }

    // unary minus binds looser than ^, so -x^2 reads as -(x^2)
    AstPtr parse_factor() {
        if (accept(Token::Kind::minus))
            return node(ExprAst::Kind::negate, parse_factor());
        return parse_power();
    }

    AstPtr parse_power() {
        AstPtr base = parse_atom();
        if (!accept(Token::Kind::caret)) return base;
        auto p = node(ExprAst::Kind::power, std::move(base));
        p->exponent = parse_exponent();
        return p;
    }

    // Exponents are bare non-negative integer literals; ^ chains associate to
    // the right and collapse at parse time (2^3^2 is 2^9).
    long long parse_exponent() {
        const Token t = peek();
        if (t.kind != Token::Kind::number)
            throw ParseError("exponent must be a non-negative integer literal", t.position);
        if (t.text.find('.') != std::string::npos)
            throw ParseError("exponent must be an integer", t.position);
        advance();
        long long value;
        try {
            value = std::stoll(t.text);
        } catch (const std::out_of_range&) {
            throw ParseError("exponent too large", t.position);
        }
        if (accept(Token::Kind::caret)) {
            long long upper = parse_exponent();
            long long acc = 1;
            for (long long i = 0; i < upper; ++i) {
                acc *= value;
                if (acc > 1000000) throw ParseError("exponent too large", t.position);
            }
            value = acc;
        }
        if (value > 1000000) throw ParseError("exponent too large", t.position);
        return value;
    }

    AstPtr parse_atom() {
        const Token t = peek();
        switch (t.kind) {
            case Token::Kind::number: {
                advance();
                auto n = node(ExprAst::Kind::number);
                try {
                    n->value = rational_from_decimal(t.text);
                } catch (const std::invalid_argument&) {
                    throw ParseError("malformed number '" + t.text + "'", t.position);
                }
                return n;
            }
            case Token::Kind::identifier: {
                advance();
                if (t.text == state_) return node(ExprAst::Kind::state);
                if (t.text == param_) return node(ExprAst::Kind::parameter);
                throw ParseError("unknown symbol '" + t.text + "'", t.position);
            }
            case Token::Kind::lparen: {
                advance();
                AstPtr inner = parse_sum();
                if (!accept(Token::Kind::rparen))
                    throw ParseError("expected ')'", peek().position);
                return inner;
            }
            default:
                throw ParseError("expected number, symbol, or '('", t.position);
        }
    }

    std::vector<Token> tokens_;
    std::string state_, param_;
    std::size_t pos_ = 0;
};

// Polynomials indexed by parameter power; trailing zero entries trimmed.
using ParamPoly = std::vector<Polynomial>;

inline void pp_trim(ParamPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline ParamPoly pp_add(const ParamPoly& a, const ParamPoly& b, bool subtract) {
    ParamPoly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        Polynomial lhs = i < a.size() ? a[i] : Polynomial();
        Polynomial rhs = i < b.size() ? b[i] : Polynomial();
        out[i] = subtract ? lhs - rhs : lhs + rhs;
    }
    pp_trim(out);
    return out;
}

inline ParamPoly pp_mul(const ParamPoly& a, const ParamPoly& b) {
    if (a.empty() || b.empty()) return {};
    ParamPoly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    pp_trim(out);
    return out;
}

inline ParamPoly pp_expand(const ExprAst& ast) {
    switch (ast.kind) {
        case ExprAst::Kind::number:
            if (ast.value == 0) return {};
            return {Polynomial(ast.value)};
        case ExprAst::Kind::state: return {Polynomial::variable()};
        case ExprAst::Kind::parameter: return {Polynomial(), Polynomial(Rational(1))};
        case ExprAst::Kind::negate: {
            ParamPoly inner = pp_expand(*ast.lhs);
            for (auto& p : inner) p = -p;
            return inner;
        }
        case ExprAst::Kind::add: return pp_add(pp_expand(*ast.lhs), pp_expand(*ast.rhs), false);
        case ExprAst::Kind::subtract:
            return pp_add(pp_expand(*ast.lhs), pp_expand(*ast.rhs), true);
        case ExprAst::Kind::multiply: return pp_mul(pp_expand(*ast.lhs), pp_expand(*ast.rhs));
        case ExprAst::Kind::power: {
            if (ast.exponent < 0)
                throw NotPolynomialInState("negative exponents are not polynomial");
            ParamPoly acc = {Polynomial(Rational(1))};
            ParamPoly base = pp_expand(*ast.lhs);
            for (long long i = 0; i < ast.exponent; ++i) acc = pp_mul(acc, base);
            return acc;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace detail

inline AstPtr parse_expression(const std::string& text, const std::string& state,
                               const std::string& param) {
    if (state == param) throw ParseError("state and parameter symbols must differ", 0);
    auto tokens = detail::tokenize(text);
    if (tokens.size() == 1) throw ParseError("empty expression", 0);
    return detail::Parser(std::move(tokens), state, param).run();
}

/// Expand the tree over rationals and group by parameter power.
inline ParamAffineSystem extract_affine_system(const ExprAst& ast, const std::string& state,
                                               const std::string& param) {
    detail::ParamPoly expanded = detail::pp_expand(ast);
    if (expanded.size() > 2)
        throw ParameterNotAffine("parameter appears with power " +
                                 std::to_string(expanded.size() - 1) +
                                 "; only affine dependence is supported");
    ParamAffineSystem sys;
    sys.state = state;
    sys.param = param;
    sys.f = expanded.empty() ? Polynomial() : expanded[0];
    sys.g = expanded.size() > 1 ? expanded[1] : Polynomial();
    if (sys.g.is_zero())
        throw NoParameter("the parameter does not appear; nothing to vary");
    return sys;
}

/// Convenience wrapper: parse then extract in one call.
inline ParamAffineSystem parse_system(const std::string& text, const std::string& state,
                                      const std::string& param) {
    return extract_affine_system(*parse_expression(text, state, param), state, param);
}

}  // namespace bifurcus::expr
