/// @file invariants.hpp
/// @brief Constants of motion and curvature diagnostics evaluated along traces.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vtg/core_geometry.hpp"
#include "vtg/integrator.hpp"

namespace vtg {

/// Which statistic decides PASS.
enum class Gate { max_deviation, stddev };

struct InvariantReport {
    std::string name;
    std::vector<double> values;
    double max_deviation{0.0};  ///< max |value - initial value|
    double stddev{0.0};
    std::optional<bool> monotone{};
    Gate gate{Gate::stddev};
    double tolerance{0.0};
    bool pass{false};
};

/// Fills in the statistics of a value series; "initial" is values.front()
/// unless `reference` is given.
InvariantReport make_report(std::string name, std::vector<double> values, Gate gate,
                            double tolerance, std::optional<double> reference = std::nullopt);

/// d/dt of samples f(t_i) using 5-point Lagrange stencils (centred where
/// possible); the grid may be non-uniform.
std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& f);

/// Relative speed drift |‖γ̇‖ - E| / E per sample, gated on its maximum.
InvariantReport speed_report(const Trace& trace, double tolerance);

/// κ = sqrt(max(0, ‖V‖² - g(V, γ̇)²/E²)) per sample.
/// Throws ArgumentError if the trace was integrated with another field.
std::vector<double> curvature_general(const Trace& trace, const ChartGeometry& chart,
                                      const VectorFieldSpec& field);

/// ‖∇^g_γ̇ γ̇‖ / E² with the acceleration taken from finite differences of the
/// stored velocities (independent of the right-hand side).
std::vector<double> kinematic_curvature(const Trace& trace, const ChartGeometry& chart);

struct KillingCheck {
    double max_residual{0.0};  ///< max |d/dt g(V, γ̇) + E² κ²|
    double max_increase{0.0};  ///< largest per-step increase of g(V, γ̇)
    bool monotone{false};
    bool pass{false};
    std::vector<double> g_v;
};

/// For a Killing field V, d/dt g(V, γ̇) = -E² κ² ≤ 0. PASS if the residual is
/// below 1e-4 and g(V, γ̇) never increases by more than 1e-8 per step.
/// Throws ArgumentError for fields not flagged Killing.
KillingCheck killing_curvature_check(const Trace& trace, const ChartGeometry& chart,
                                     const VectorFieldSpec& field);

/// e^{σ(γ)} g(γ̇, X) along the trace; constant when V = -grad σ and X is
/// Killing for e^{2σ} g.
InvariantReport conformal_constant(const Trace& trace, const ChartGeometry& chart,
                                   const ScalarField& sigma, const std::function<Vec2(Vec2)>& x,
                                   double tolerance = 1e-6);

/// A point map with its differential.
struct Isometry {
    std::function<Vec2(Vec2)> map;
    std::function<Vec2(Vec2, Vec2)> push;  ///< (point, vector) -> dΦ_point(vector)
};

Isometry identity_isometry();
Isometry rotation_about_origin(double angle);
Isometry translation(Vec2 offset);

/// Maps the launch state through the isometry, re-integrates with the
/// trace's own settings and span, and returns the max pointwise chart
/// distance to the mapped trace. Throws ArgumentError if the isometry does
/// not commute with V at 20 spot-check points.
double killing_flow_symmetry(const Trace& trace, const ChartGeometry& chart,
                             const VectorFieldSpec& field, const Isometry& isometry);

}  // namespace vtg
