#include "awb/expr.hpp"

#include <cctype>

namespace awb {

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column),
      message_(what) {}

UnknownVariable::UnknownVariable(std::string name, int line, int column)
    : std::runtime_error("unknown variable '" + name + "' at line " + std::to_string(line) + ", column " +
                         std::to_string(column)),
      name_(std::move(name)),
      line_(line),
      column_(column) {}

namespace {

struct Token {
    enum class Type { number, ident, op, end };
    Type type;
    std::string text;
    int line, column;
};

std::vector<Token> tokenize(std::string_view s, int line, int col) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        unsigned char c = s[i];
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        std::size_t j = i;
        if (std::isdigit(c)) {
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Token::Type::number, std::string(s.substr(i, j - i)), line, col});
        } else if (std::isalpha(c) || c == '_') {
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Token::Type::ident, std::string(s.substr(i, j - i)), line, col});
        } else if (std::string_view("+-*/^()").find(static_cast<char>(c)) != std::string_view::npos) {
            j = i + 1;
            out.push_back({Token::Type::op, std::string(1, static_cast<char>(c)), line, col});
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + static_cast<char>(c) + "'");
        }
        advance(j - i);
    }
    out.push_back({Token::Type::end, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    Expr parse() {
        Expr e = expr();
        if (peek().type != Token::Type::end) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return t_[pos_]; }
    bool is_op(const char* op) const { return peek().type == Token::Type::op && peek().text == op; }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(peek().line, peek().column, what); }

    Expr node(Expr::Kind k, const Token& at) {
        Expr e;
        e.kind = k;
        e.line = at.line;
        e.column = at.column;
        return e;
    }

    Expr expr() {
        Expr lhs = term();
        while (is_op("+") || is_op("-")) {
            Token op = t_[pos_++];
            Expr n = node(op.text == "+" ? Expr::Kind::add : Expr::Kind::sub, op);
            n.kids.push_back(std::move(lhs));
            n.kids.push_back(term());
            lhs = std::move(n);
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = factor();
        while (is_op("*") || is_op("/")) {
            Token op = t_[pos_++];
            Expr n = node(op.text == "*" ? Expr::Kind::mul : Expr::Kind::div, op);
            n.kids.push_back(std::move(lhs));
            n.kids.push_back(factor());
            lhs = std::move(n);
        }
        return lhs;
    }

    Expr factor() {
        if (is_op("-")) {
            Token op = t_[pos_++];
            Expr n = node(Expr::Kind::negate, op);
            n.kids.push_back(factor());
            return n;
        }
        Expr a = atom();
        if (is_op("^")) {
            Token op = t_[pos_++];
            if (peek().type != Token::Type::number) fail("exponent must be a nonnegative integer");
            Expr n = node(Expr::Kind::power, op);
            n.exponent = static_cast<unsigned>(std::stoul(t_[pos_++].text));
            n.kids.push_back(std::move(a));
            return n;
        }
        return a;
    }

    Expr atom() {
        const Token& tok = peek();
        if (tok.type == Token::Type::number) {
            Expr n = node(Expr::Kind::number, tok);
            n.value = Rational(mpz_class(tok.text));
            ++pos_;
            return n;
        }
        if (tok.type == Token::Type::ident) {
            Expr n = node(Expr::Kind::variable, tok);
            n.name = tok.text;
            ++pos_;
            return n;
        }
        if (is_op("(")) {
            ++pos_;
            Expr inner = expr();
            if (!is_op(")")) fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (tok.type == Token::Type::end) fail("unexpected end of input");
        fail("unexpected '" + tok.text + "'");
    }

    std::vector<Token> t_;
    std::size_t pos_ = 0;
};

void check_names(const Expr& e, const std::vector<Symbol>& ctx) {
    if (e.kind == Expr::Kind::variable) {
        for (Symbol s : ctx)
            if (s.name() == e.name) return;
        throw UnknownVariable(e.name, e.line, e.column);
    }
    for (const auto& k : e.kids) check_names(k, ctx);
}

}  // namespace

Expr parse_syntax(std::string_view text, int first_line, int first_column) {
    return Parser(tokenize(text, first_line, first_column)).parse();
}

Expr parse_expr(std::string_view text, const std::vector<Symbol>& context) {
    Expr e = parse_syntax(text);
    check_names(e, context);
    return e;
}

RatFn eval_expr(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::number: return RatFn(e.value);
        case Expr::Kind::variable: return RatFn::variable(Symbol::intern(e.name));
        case Expr::Kind::add: return eval_expr(e.kids[0]) + eval_expr(e.kids[1]);
        case Expr::Kind::sub: return eval_expr(e.kids[0]) - eval_expr(e.kids[1]);
        case Expr::Kind::mul: return eval_expr(e.kids[0]) * eval_expr(e.kids[1]);
        case Expr::Kind::div: return eval_expr(e.kids[0]) / eval_expr(e.kids[1]);
        case Expr::Kind::power: return eval_expr(e.kids[0]).pow(e.exponent);
        case Expr::Kind::negate: return -eval_expr(e.kids[0]);
    }
    return RatFn();
}

RatFn parse_ratfn(std::string_view text, const std::vector<Symbol>& context) {
    return eval_expr(parse_expr(text, context));
}

}  // namespace awb
