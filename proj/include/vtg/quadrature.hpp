/// @file quadrature.hpp
/// @brief Adaptive Gauss-Kronrod quadrature used by the surface and strip modules.
#pragma once

#include <functional>

namespace vtg {

struct QuadratureValue {
    double value{0.0};
    double error{0.0};
};

/// ∫_a^b f with adaptive 15-point Gauss-Kronrod refinement to relative tolerance `tol`.
QuadratureValue integrate_gk(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-12);

/// Fixed 15-point Gauss-Legendre rule on [a, b]; for short panels of smooth integrands.
double integrate_gauss15(const std::function<double(double)>& f, double a, double b);

}  // namespace vtg
