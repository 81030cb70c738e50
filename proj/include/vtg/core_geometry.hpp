/// @file core_geometry.hpp
/// @brief 2D coordinate charts: metric, Levi-Civita Christoffel symbols,
/// gradients, orthonormal frames and vector fields.
#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "vtg/vec2.hpp"

namespace vtg {

/// Open coordinate box (u_min, u_max) x (v_min, v_max); bounds may be infinite.
struct DomainBox {
    double u_min{-std::numeric_limits<double>::infinity()};
    double u_max{std::numeric_limits<double>::infinity()};
    double v_min{-std::numeric_limits<double>::infinity()};
    double v_max{std::numeric_limits<double>::infinity()};

    bool contains(Vec2 p) const {
        return p.u > u_min && p.u < u_max && p.v > v_min && p.v < v_max;
    }
};

enum class DerivativeMode { analytic, finite_difference };

/// Central-difference step used for every metric/scalar derivative.
double fd_step(double coordinate);

using MetricFn = std::function<Mat2(Vec2)>;
using ChristoffelFn = std::function<Christoffel(Vec2)>;

/// A scalar function on a chart with an optional analytic differential
/// (the components (∂_u f, ∂_v f)).
struct ScalarField {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> differential{};

    double operator()(Vec2 p) const { return value(p); }
};

/// Differential of a scalar, analytic when available, central differences otherwise.
Vec2 differential(const ScalarField& f, Vec2 p);

/// A 2D chart with its Riemannian metric.
///
/// Evaluation at or outside the open domain box throws DomainError; a metric
/// that is not positive definite at the evaluation point throws
/// DegeneracyError.
class ChartGeometry {
public:
    ChartGeometry() = default;
    ChartGeometry(std::string id, std::array<std::string, 2> coordinate_names, DomainBox domain,
                  MetricFn metric, ChristoffelFn christoffel = {});

    const std::string& id() const { return id_; }
    const std::array<std::string, 2>& coordinate_names() const { return names_; }
    const DomainBox& domain() const { return domain_; }

    bool has_analytic_christoffel() const { return static_cast<bool>(christoffel_); }
    DerivativeMode mode() const { return mode_; }
    /// Selecting analytic mode on a chart without an analytic evaluator throws ArgumentError.
    void set_mode(DerivativeMode mode);

    bool inside(Vec2 p) const { return domain_.contains(p); }
    void require_inside(Vec2 p) const;

    /// g_ij at p, checked for domain membership and positive definiteness.
    Mat2 metric(Vec2 p) const;
    /// g^ij at p.
    Mat2 inverse_metric(Vec2 p) const;

    /// Γ^k_ij at p using the chart's derivative mode.
    Christoffel christoffel(Vec2 p) const;
    /// Γ^k_ij from central differences of the metric, regardless of mode.
    Christoffel christoffel_fd(Vec2 p) const;

    double inner(Vec2 p, Vec2 x, Vec2 y) const;
    double norm(Vec2 p, Vec2 x) const;

    /// Metric gradient: the vector G with g(G, X) = df(X).
    Vec2 grad(const ScalarField& f, Vec2 p) const;

    /// Levi-Civita derivative ∇^g_X Y of a vector field Y along the vector X at p.
    Vec2 covariant_derivative(const std::function<Vec2(Vec2)>& y, Vec2 p, Vec2 x) const;

private:
    std::string id_;
    std::array<std::string, 2> names_{"u", "v"};
    DomainBox domain_{};
    MetricFn metric_{};
    ChristoffelFn christoffel_{};
    DerivativeMode mode_{DerivativeMode::finite_difference};
};

/// Contracts Γ^k_ij x^i y^j.
Vec2 contract(const Christoffel& gamma, Vec2 x, Vec2 y);

/// Orthonormal frame e₁, e₂ given in chart components.
struct OrthoFrame {
    std::function<Vec2(Vec2)> e1;
    std::function<Vec2(Vec2)> e2;
};

/// max |g(e_i, e_j) - δ_ij| at p.
double orthonormality_defect(const ChartGeometry& chart, const OrthoFrame& frame, Vec2 p);

/// The torsion-defining vector field V together with optional potentials.
///
/// `sigma` declares V = -grad σ; `plane_potential` declares the plane-flat
/// relation f = ∂_y p, g = -∂_x p. `killing` is asserted by the author of a
/// scenario and checked by killing_residual.
struct VectorFieldSpec {
    std::string id;
    std::function<Vec2(Vec2)> components;
    std::optional<ScalarField> sigma{};
    std::optional<ScalarField> plane_potential{};
    bool killing{false};

    Vec2 operator()(Vec2 p) const { return components(p); }
};

/// The zero field; its geodesics are the Levi-Civita geodesics.
VectorFieldSpec zero_field();

/// |V + grad σ|_g at p. Throws ArgumentError if σ is absent.
double gradient_relation_residual(const ChartGeometry& chart, const VectorFieldSpec& field, Vec2 p);

/// max component of |(V_u, V_v) - (∂_v p, -∂_u p)| at p. Throws ArgumentError if p is absent.
double plane_potential_residual(const VectorFieldSpec& field, Vec2 p);

/// g(∇_X V, Y) + g(∇_Y V, X) at p; vanishes for Killing fields.
double killing_residual(const ChartGeometry& chart, const VectorFieldSpec& field, Vec2 p, Vec2 x,
                        Vec2 y);

}  // namespace vtg
