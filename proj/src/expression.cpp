/// @file expression.cpp
#include "vtg/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

using Node = std::function<double(const double*)>;

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

    Node parse() {
        Node n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    const std::string& s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_{0};

    [[noreturn]] void fail(const std::string& what) const {
        throw ArgumentError("expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " +
                            what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Node expr() {
        Node lhs = term();
        for (;;) {
            if (eat('+')) {
                lhs = [a = lhs, b = term()](const double* x) { return a(x) + b(x); };
            } else if (eat('-')) {
                lhs = [a = lhs, b = term()](const double* x) { return a(x) - b(x); };
            } else {
                return lhs;
            }
        }
    }

    Node term() {
        Node lhs = unary();
        for (;;) {
            if (eat('*')) {
                lhs = [a = lhs, b = unary()](const double* x) { return a(x) * b(x); };
            } else if (eat('/')) {
                lhs = [a = lhs, b = unary()](const double* x) { return a(x) / b(x); };
            } else {
                return lhs;
            }
        }
    }

    Node unary() {
        if (eat('-')) return [a = unary()](const double* x) { return -a(x); };
        if (eat('+')) return unary();
        return power();
    }

    Node power() {
        Node base = primary();
        if (eat('^')) {
            Node exponent = unary();
            return [a = base, b = exponent](const double* x) { return std::pow(a(x), b(x)); };
        }
        return base;
    }

    Node primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (eat('(')) {
            Node n = expr();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Node number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return [value](const double*) { return value; };
    }

    Node identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string name = s_.substr(start, pos_ - start);

        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return [i](const double* x) { return x[i]; };
        if (name == "pi") return [](const double*) { return std::numbers::pi; };
        if (name == "e") return [](const double*) { return std::numbers::e; };

        static const std::map<std::string, double (*)(double)> unary_fns{
            {"sin", [](double a) { return std::sin(a); }},
            {"cos", [](double a) { return std::cos(a); }},
            {"tan", [](double a) { return std::tan(a); }},
            {"asin", [](double a) { return std::asin(a); }},
            {"acos", [](double a) { return std::acos(a); }},
            {"atan", [](double a) { return std::atan(a); }},
            {"sinh", [](double a) { return std::sinh(a); }},
            {"cosh", [](double a) { return std::cosh(a); }},
            {"tanh", [](double a) { return std::tanh(a); }},
            {"asinh", [](double a) { return std::asinh(a); }},
            {"acosh", [](double a) { return std::acosh(a); }},
            {"atanh", [](double a) { return std::atanh(a); }},
            {"exp", [](double a) { return std::exp(a); }},
            {"log", [](double a) { return std::log(a); }},
            {"sqrt", [](double a) { return std::sqrt(a); }},
            {"abs", [](double a) { return std::abs(a); }},
        };
        if (auto it = unary_fns.find(name); it != unary_fns.end()) {
            if (!eat('(')) fail("expected '(' after " + name);
            Node arg = expr();
            if (!eat(')')) fail("expected ')'");
            return [f = it->second, arg](const double* x) { return f(arg(x)); };
        }
        if (name == "pow" || name == "atan2") {
            if (!eat('(')) fail("expected '(' after " + name);
            Node a = expr();
            if (!eat(',')) fail("expected ','");
            Node b = expr();
            if (!eat(')')) fail("expected ')'");
            if (name == "pow") return [a, b](const double* x) { return std::pow(a(x), b(x)); };
            return [a, b](const double* x) { return std::atan2(a(x), b(x)); };
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

Expression Expression::compile(const std::string& text, const std::vector<std::string>& variables) {
    Expression e;
    e.text_ = text;
    e.eval_ = Parser(text, variables).parse();
    return e;
}

}  // namespace vtg
