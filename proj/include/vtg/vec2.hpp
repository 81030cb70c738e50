/// @file vec2.hpp
/// @brief Small fixed-size value types for 2D chart computations.
#pragma once

#include <array>
#include <cmath>

namespace vtg {

/// Chart components (u, v) of a point or a tangent vector.
struct Vec2 {
    double u{0.0};
    double v{0.0};

    constexpr double operator[](int i) const { return i == 0 ? u : v; }
    constexpr double& operator[](int i) { return i == 0 ? u : v; }

    constexpr Vec2& operator+=(Vec2 o) { u += o.u; v += o.v; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { u -= o.u; v -= o.v; return *this; }
    constexpr Vec2& operator*=(double s) { u *= s; v *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.u + b.u, a.v + b.v}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.u - b.u, a.v - b.v}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.u, -a.v}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.u, s * a.v}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.u, s * a.v}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

/// Plain euclidean length of the component pair (not the metric norm).
inline double euclid(Vec2 a) { return std::hypot(a.u, a.v); }

/// Symmetric 2x2 matrix, row-major.
struct Mat2 {
    std::array<std::array<double, 2>, 2> a{};

    constexpr double operator()(int i, int j) const { return a[i][j]; }
    constexpr double& operator()(int i, int j) { return a[i][j]; }

    constexpr double det() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

    constexpr Vec2 operator*(Vec2 x) const {
        return {a[0][0] * x.u + a[0][1] * x.v, a[1][0] * x.u + a[1][1] * x.v};
    }

    static constexpr Mat2 diag(double d0, double d1) { return Mat2{{{{d0, 0.0}, {0.0, d1}}}}; }
};

/// Christoffel symbols of the second kind, indexed [k][i][j] for Γ^k_ij.
using Christoffel = std::array<std::array<std::array<double, 2>, 2>, 2>;

}  // namespace vtg
