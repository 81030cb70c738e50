/// @file integrator.hpp
/// @brief Geodesics of the metric connection with vectorial torsion
///
///   ∇_X Y = ∇^g_X Y + g(X, Y) V - g(V, Y) X
///
/// in chart coordinates. With the speed E = |γ̇| frozen at launch the
/// geodesic equation reads
///
///   ∇^g_γ̇ γ̇ + E² V - g(V, γ̇) γ̇ = 0.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vtg/core_geometry.hpp"

namespace vtg {

struct GeodesicState {
    double t{0.0};
    Vec2 position{};
    Vec2 velocity{};
};

enum class Method { rk4, rk45 };

struct IntegratorSettings {
    Method method{Method::rk4};
    double step{1e-3};  ///< fixed step (rk4) or initial step (rk45)
    double rtol{1e-10};
    double atol{1e-12};
    double t0{0.0};
    double t1{1.0};  ///< may be smaller than t0 for backward integration
    std::size_t max_steps{10'000'000};

    /// Throws ArgumentError on a non-positive step or tolerance.
    void validate() const;
};

enum class StopReason { reached_end, max_steps, boundary };

const char* to_string(Method m);
const char* to_string(StopReason r);

/// Per-sample diagnostics: metric speed, Riemannian curvature from the
/// assembled acceleration, and g(V, γ̇).
struct StepDiagnostics {
    double speed{0.0};
    double kappa{0.0};
    double g_v{0.0};
};

struct TraceMeta {
    std::string chart_id;
    std::string field_id;
    double energy{1.0};  ///< the launch speed E
    IntegratorSettings settings{};
    StopReason stop{StopReason::reached_end};
    std::size_t launch_index{0};  ///< index of the launch state inside `states`
};

/// Time-ordered geodesic samples (strictly increasing t, also for backward runs).
struct Trace {
    TraceMeta meta;
    std::vector<GeodesicState> states;
    std::vector<StepDiagnostics> diagnostics;

    std::size_t size() const { return states.size(); }
    const GeodesicState& front() const { return states.front(); }
    const GeodesicState& back() const { return states.back(); }
    /// The sample at the integration end point (last in integration order).
    const GeodesicState& end_state() const;
};

/// Chart acceleration of the geodesic:
///   ẍ^k = -Γ^k_ij ẋ^i ẋ^j - E² V^k + g(V, γ̇) ẋ^k.
Vec2 geodesic_rhs(const ChartGeometry& chart, const VectorFieldSpec& field,
                  const GeodesicState& state, double energy);

/// Diagnostics for one state; kappa = |∇^g_γ̇ γ̇| / E² with the covariant
/// acceleration taken from geodesic_rhs.
StepDiagnostics diagnose(const ChartGeometry& chart, const VectorFieldSpec& field,
                         const GeodesicState& state, double energy);

/// Integrates from `initial` (whose t is replaced by settings.t0) to settings.t1.
///
/// Stops at t1, after max_steps, or when a step would leave the open domain;
/// in the last case the exit time is refined by bisection to 1e-9 and the
/// stop reason recorded. A launch outside the domain throws DomainError, a
/// zero launch velocity ArgumentError.
Trace integrate(const ChartGeometry& chart, const VectorFieldSpec& field,
                const GeodesicState& initial, const IntegratorSettings& settings);

/// integrate() with V = 0.
Trace levi_civita_integrate(const ChartGeometry& chart, const GeodesicState& initial,
                            const IntegratorSettings& settings);

/// Integrates backward to t_min and forward to t_max from the launch at
/// settings.t0 and merges both halves into one time-ordered trace.
Trace integrate_both_ways(const ChartGeometry& chart, const VectorFieldSpec& field,
                          const GeodesicState& initial, IntegratorSettings settings, double t_min,
                          double t_max);

/// Cubic Hermite interpolation of position and velocity at time t
/// (clamped to the trace span).
GeodesicState sample_at(const Trace& trace, double t);

}  // namespace vtg
