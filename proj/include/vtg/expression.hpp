/// @file expression.hpp
/// @brief Small arithmetic expression compiler for inline scenario formulas.
///
/// Grammar: + - * / ^ (right-associative), unary minus, parentheses, numeric
/// literals, the constants pi and e, and the functions sin cos tan asin acos
/// atan sinh cosh tanh asinh acosh atanh exp log sqrt abs, plus atan2(a, b)
/// and pow(a, b).
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace vtg {

class Expression {
public:
    Expression() = default;

    /// Compiles `text` over the named variables; throws ArgumentError on a
    /// syntax error or an unknown identifier.
    static Expression compile(const std::string& text, const std::vector<std::string>& variables);

    double operator()(const std::vector<double>& values) const { return eval_(values.data()); }
    double operator()(double a, double b) const {
        const double v[2] = {a, b};
        return eval_(v);
    }

    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::function<double(const double*)> eval_;
};

}  // namespace vtg
