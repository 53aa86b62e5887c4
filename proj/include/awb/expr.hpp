#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "awb/ratfn.hpp"

namespace awb {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& what);
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    int line_, column_;
    std::string message_;
};

class UnknownVariable : public std::runtime_error {
public:
    UnknownVariable(std::string name, int line, int column);
    const std::string& name() const { return name_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    std::string name_;
    int line_, column_;
};

struct Expr {
    enum class Kind { number, variable, add, sub, mul, div, power, negate };
    Kind kind = Kind::number;
    Rational value;       // number
    std::string name;     // variable
    unsigned exponent = 0;  // power
    std::vector<Expr> kids;
    int line = 1, column = 1;
};

// Parses without resolving identifiers. line/column of the first character
// can be offset so errors point into a surrounding file.
Expr parse_syntax(std::string_view text, int first_line = 1, int first_column = 1);

// Parses and checks every identifier against the context.
Expr parse_expr(std::string_view text, const std::vector<Symbol>& context);

RatFn eval_expr(const Expr& e);

// Convenience: parse_expr + eval_expr.
RatFn parse_ratfn(std::string_view text, const std::vector<Symbol>& context);

}  // namespace awb
