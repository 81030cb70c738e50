/// @file errors.hpp
/// @brief Exception types shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace vtg {

/// A point lies on or outside the open domain box of a chart.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The metric is singular or not positive definite where it was evaluated.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs that are inconsistent with each other or out of range.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A request that is well formed but outside what the operation certifies.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A quantity left the domain of a real function (e.g. arcsin of |x| > 1).
class NumericalDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace vtg
