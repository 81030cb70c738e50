/// @file conformal.hpp
/// @brief Conformal change g̃ = e^{2σ} g and the equivalence between geodesics
/// of the connection defined by V = -grad σ and Levi-Civita geodesics of g̃.
#pragma once

#include <cstddef>

#include "vtg/core_geometry.hpp"
#include "vtg/integrator.hpp"

namespace vtg {

/// Chart with metric e^{2σ} g on the same coordinates and domain. Its
/// Christoffel symbols come from finite differences of the new metric.
ChartGeometry conformal_metric(const ChartGeometry& chart, const ScalarField& sigma);

struct ConformalPair {
    ChartGeometry base;
    ScalarField sigma;
    ChartGeometry derived;
};

ConformalPair make_conformal_pair(const ChartGeometry& chart, const ScalarField& sigma);

/// Christoffel symbols of g̃ predicted from those of g:
///   Γ̃^k_ij = Γ^k_ij + ∂_iσ δ^k_j + ∂_jσ δ^k_i - g_ij (grad σ)^k.
Christoffel predicted_conformal_christoffel(const ConformalPair& pair, Vec2 p);

/// max |Γ̃(finite differences of g̃) - predicted| at p.
double conformal_christoffel_residual(const ConformalPair& pair, Vec2 p);

/// Reparametrizes a trace of the connection with V = -grad σ by solving
/// dτ/dt = e^{-σ(γ(τ))} (RK4 with step dt, Hermite interpolation of the
/// trace), starting at τ = trace.front().t. The result samples γ(τ(t)) with
/// velocity τ̇ γ̇(τ) and is labelled as a Levi-Civita trace of the
/// conformal chart. Throws ArgumentError if the field has no σ or the trace
/// was integrated with another field.
Trace reparametrize(const Trace& trace, const ChartGeometry& chart, const VectorFieldSpec& field,
                    double dt = 1e-3);

/// max over samples of ‖γ̈ + Γ(γ̇, γ̇)‖ (acceleration by finite differences).
double levi_civita_residual(const Trace& trace, const ChartGeometry& chart);

/// Symmetric Hausdorff distance between the point sets of two traces after
/// resampling each to `samples` points by chordal arc length; distances are
/// measured from the vertices of one polyline to the segments of the other.
/// Throws ArgumentError for traces with fewer than 2 points.
double compare_point_sets(const Trace& a, const Trace& b, std::size_t samples = 512);

/// ∫ e^{σ(γ)} ‖γ̇‖ dt, the g̃-length of a trace.
double conformal_length(const Trace& trace, const ChartGeometry& chart, const ScalarField& sigma);

struct EquivalenceResult {
    Trace nabla;  ///< geodesic of the connection with vectorial torsion
    Trace tilde;  ///< Levi-Civita geodesic of e^{2σ} g
    double tilde_length{0.0};
    double distance{0.0};
};

/// Integrates both geodesics from the same point, the g̃ one launched at unit
/// g̃-speed in the direction of the ∇ launch velocity rotated by
/// `angle_offset` radians, and run for the g̃-length of the ∇ trace.
EquivalenceResult conformal_equivalence(const ChartGeometry& chart, const VectorFieldSpec& field,
                                        const GeodesicState& launch,
                                        const IntegratorSettings& settings,
                                        double angle_offset = 0.0);

/// Rotates a tangent vector by `angle` radians measured with the metric at p.
Vec2 rotate_tangent(const ChartGeometry& chart, Vec2 p, Vec2 w, double angle);

}  // namespace vtg
