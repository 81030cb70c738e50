/// @file plane.hpp
/// @brief The euclidean plane with V = f ∂_x + g ∂_y.
///
/// Geodesics satisfy ẍ = -κ ẏ, ÿ = κ ẋ with signed curvature κ = f ẏ - g ẋ.
/// When f = ∂_y p and g = -∂_x p the connection is flat and ż e^{-ip} is
/// constant. For the shear field V = y ∂_x the quantity ±y²/2 - arcsin ẏ
/// (± = sign ẋ) is conserved and confines geodesics to horizontal strips.
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vtg/core_geometry.hpp"
#include "vtg/integrator.hpp"
#include "vtg/invariants.hpp"

namespace vtg {

/// Chart "plane": coordinates (x, y), g = diag(1, 1), Γ = 0.
ChartGeometry euclidean_plane();

/// Upper half plane y > 0 with the euclidean metric.
ChartGeometry upper_half_plane();

struct PlaneField {
    std::string id;
    std::function<double(double, double)> f;
    std::function<double(double, double)> g;
    std::optional<ScalarField> potential{};  ///< p with f = ∂_y p, g = -∂_x p
    bool killing{false};

    VectorFieldSpec to_vector_field() const;
    /// -(∂_x f + ∂_y g) by central differences; the curvature density of ∇.
    double curvature_density(double x, double y) const;
};

/// f = -y, g = x from p = -(x² + y²)/2; generates rotations about the origin.
PlaneField winding_field();
/// f = y, g = 0 from p = y²/2.
PlaneField shear_field();
/// V = 0.
PlaneField zero_plane_field();

/// Upper half plane gradient field V = -grad σ with σ = -ln y, i.e. V = (0, 1/y).
VectorFieldSpec half_plane_sigma_field();

/// κ = f ẏ - g ẋ at the state.
double plane_curvature(const PlaneField& field, const GeodesicState& state);

/// Signed curvature (ẋ ÿ - ẏ ẍ) / |γ̇|³ from finite differences of the trace.
std::vector<double> signed_kinematic_curvature(const Trace& trace);

struct FlatInvariantReport {
    std::complex<double> z0;
    std::vector<std::complex<double>> values;  ///< ż e^{-ip(γ)} per sample
    double max_deviation{0.0};                 ///< max |value - z0|
    double max_modulus_error{0.0};             ///< max ||ż| - 1|
    bool pass{false};
};

/// Gated at max |ż e^{-ip} - z0| < tol and ||ż| - 1| < tol. The trace must
/// have E = 1. Throws ArgumentError if the field has no potential.
FlatInvariantReport flat_invariant(const Trace& trace, const PlaneField& field, double tol = 1e-6);

struct BranchSegment {
    std::size_t begin{0};  ///< first sample index
    std::size_t end{0};    ///< one past the last sample index
    int sign{1};           ///< sign of ẋ on the segment
    double mean{0.0};
    double stddev{0.0};
};

struct ArcsinReport {
    std::vector<double> values;  ///< sign(ẋ) y²/2 - arcsin ẏ per sample
    std::vector<BranchSegment> segments;
    std::vector<double> switch_times;  ///< times where ẋ changes sign
    double max_segment_stddev{0.0};
    bool pass{false};
};

/// c = ±y²/2 - arcsin ẏ for the shear field, split at sign changes of ẋ
/// (samples with |ẋ| < 1e-9 close a segment). PASS if every segment has
/// std below `tol`. |ẏ| > 1 (beyond roundoff) throws NumericalDomainError.
ArcsinReport arcsin_invariant(const Trace& trace, double tol = 1e-6);

/// Invariant value c for a unit launch velocity (ẋ₀, ẏ₀) at height y₀.
double arcsin_constant(double y0, double ydot0, double xdot0);

struct StripBounds {
    double c{0.0};
    int branch{1};
    double lower{0.0};  ///< y₁ (may be -inf)
    double upper{0.0};  ///< y₂ (may be +inf)
    bool degenerate{false};
};

/// Nearest singular levels of sin(±y²/2 - c) bracketing y₀. A horizontal
/// launch (ẏ₀ = 0) gives the degenerate strip [y₀, y₀].
StripBounds strip_bounds(double y0, double ydot0, double xdot0);

struct StripQuadrature {
    double t{0.0};
    double error{0.0};
    bool divergent{false};
};

/// Value reported in place of a divergent strip integral.
inline constexpr double kDivergentTime = 1e300;

/// t = ∫_{y₀}^{y} dy / sin(branch·y²/2 - c). Singular endpoints are approached
/// through geometrically shrinking subintervals. If y sits on a singular
/// level the integral diverges and {kDivergentTime, divergent = true} is
/// returned; a singular level strictly inside the interval throws ArgumentError.
StripQuadrature strip_quadrature(double y0, double y, double c, int branch);

/// Time at which the (monotone in y) trace reaches height y, by Hermite
/// interpolation and bisection. Throws ArgumentError if y is not crossed.
double time_at_height(const Trace& trace, double y);

struct ShootingSweep {
    std::size_t launches{0};
    double max_abs_y{0.0};          ///< largest |y| reached by any geodesic
    double max_strip_excess{0.0};   ///< largest excursion beyond a launch's own strip
    double reachable_bound{0.0};    ///< sup of |strip bound| over all launch angles
    double min_distance_to_target{0.0};
    bool target_reached{false};
};

/// Launches `angles` unit geodesics of the shear field from `origin`, integrates
/// each over [-horizon, horizon] and checks whether any comes within `hit_radius`
/// of `target` or enters the band |y| >= |target.y|.
ShootingSweep shooting_sweep(Vec2 origin, Vec2 target, std::size_t angles, double horizon,
                             double step, double hit_radius = 1e-3);

}  // namespace vtg
