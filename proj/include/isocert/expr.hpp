#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace isocert {

/// Arithmetic expression in one variable `x`.
///
/// Grammar (highest precedence first): literals, `x`, calls to
/// abs/log/exp/sqrt/pow(a, b), parentheses; `^` (right associative); unary
/// minus; `*` `/`; `+` `-`. So `-x^2` is `-(x^2)` and `2^-1` is `2^(-1)`.
class Expr {
public:
    struct Node;

    /// Throws ParseError (with byte offset) on malformed input or an unknown
    /// identifier.
    static Expr parse(std::string_view text);

    /// Throws DomainError when a subexpression leaves its real domain
    /// (log of a nonpositive number, division by zero, ...).
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    /// Fully parenthesized text; parse(print()) reproduces the same tree.
    std::string print() const;

    bool operator==(const Expr& other) const;

private:
    std::shared_ptr<const Node> root_;
};

} // namespace isocert
