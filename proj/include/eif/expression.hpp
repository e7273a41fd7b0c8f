#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eif {

// Arithmetic over point coordinates x0, x1, ...
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'x' index | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Functions: exp, log, sqrt, abs, pow(a, b), expit, c10 (clamp to [-10, 10]).
class Expression {
public:
    struct Node;

    Expression();
    static Expression parse(std::string_view text);
    static Expression constant(double v);

    double operator()(std::span<const double> u) const;

    const std::string& text() const { return text_; }
    // One past the largest referenced coordinate index; 0 when none.
    std::size_t arity() const { return arity_; }
    // (coordinate, location) pairs where the expression has a kink in that coordinate.
    std::vector<std::pair<std::size_t, double>> kinks() const;

    bool operator==(const Expression& other) const { return text_ == other.text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    std::size_t arity_ = 0;
};

double expit(double z);
double clamp10(double z);

}  // namespace eif
