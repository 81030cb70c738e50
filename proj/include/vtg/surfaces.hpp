/// @file surfaces.hpp
/// @brief Surfaces of revolution M(s, φ) = (r(s) cos φ, r(s) sin φ, h(s)) with
/// their flat metric connection.
///
/// With e₁ = ∂_s and e₂ = (1/r) ∂_φ declared parallel, the connection has
/// vectorial torsion with V = (r'/r) e₁ = -grad(-ln r). Its geodesics are the
/// loxodromes, and x = φ, y = ∫ ds / r maps them to straight lines.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "vtg/core_geometry.hpp"
#include "vtg/integrator.hpp"
#include "vtg/invariants.hpp"

namespace vtg {

/// Profile values and s-derivatives at one point.
struct ProfileJet {
    double r{0.0};
    double dr{0.0};
    double ddr{0.0};
    double h{0.0};
    double dh{0.0};
};

struct RevolutionProfile {
    std::function<ProfileJet(double)> jet;
    bool natural{false};
    double s_min{0.0};
    double s_max{0.0};
};

/// |r'² + h'² - 1| at s.
double natural_defect(const RevolutionProfile& profile, double s);

/// A profile curve (r(t), h(t)) in an arbitrary parameter t, with first and
/// second t-derivatives.
struct ProfileCurve {
    std::function<std::array<double, 3>(double)> r;  ///< r, r_t, r_tt
    std::function<std::array<double, 3>(double)> h;  ///< h, h_t, h_tt
    double t_min{0.0};
    double t_max{0.0};
    double t_origin{0.0};  ///< parameter value mapped to s = 0
};

/// Arc-length reparametrization: s(t) by adaptive quadrature to 1e-12,
/// t(s) by bisection-safeguarded Newton to 1e-10.
RevolutionProfile reparametrize_by_arclength(const ProfileCurve& curve);

struct CatalogSurface {
    std::string name;
    RevolutionProfile profile;
    ChartGeometry chart;    ///< coordinates (s, φ), g = diag(1, r²)
    VectorFieldSpec field;  ///< V = (r'/r, 0), σ = -ln r
    OrthoFrame frame;       ///< e₁ = ∂_s, e₂ = (1/r) ∂_φ
    double mercator_anchor{0.0};
};

/// Builds the catalog entry for a natural profile. Throws ArgumentError if
/// the profile is not flagged natural or fails r'² + h'² = 1 on samples.
CatalogSurface make_surface_of_revolution(std::string name, RevolutionProfile profile,
                                          double mercator_anchor);

/// r = sin s, h = cos s on s ∈ (1e-3, π - 1e-3); Mercator anchor π/2.
CatalogSurface make_sphere();
/// r = e^{-s}, h = arctanh √(1-e^{-2s}) - √(1-e^{-2s}) on s ∈ (0, 8).
CatalogSurface make_pseudosphere();
/// (cosh t, t) reparametrized by arc length, s ∈ (-10, 10).
CatalogSurface make_catenoid();

/// y(s) = ∫_{anchor}^{s} ds / r. Throws DomainError outside the open s-range.
double mercator_map(const CatalogSurface& surface, double s);
/// ∫_{a}^{b} ds / r.
double mercator_increment(const CatalogSurface& surface, double a, double b);

/// Metric e^{2σ} g = diag(1/r², 1) written in Mercator coordinates (x, y) = (φ, y(s)),
/// with ds/dy evaluated numerically; equals the identity.
Mat2 mercator_conformal_metric(const CatalogSurface& surface, double s);

/// Unit-speed launch at angle ν from the meridian: γ̇ = E (cos ν e₁ + sin ν e₂).
GeodesicState loxodrome_launch(const CatalogSurface& surface, double s, double phi,
                               double angle_to_meridian, double energy = 1.0);

/// g(γ̇, e₂) / E per sample, the cosine of the angle with the parallel circle.
InvariantReport loxodrome_check(const Trace& trace, const CatalogSurface& surface,
                                double tolerance = 1e-6);

struct LineFit {
    double slope{0.0};
    double intercept{0.0};
    double max_residual{0.0};  ///< max orthogonal distance from the fitted line
};

/// Mercator image (φ, y(s)) of every sample with its total-least-squares line.
LineFit mercator_line_fit(const Trace& trace, const CatalogSurface& surface);
std::vector<Vec2> mercator_image(const Trace& trace, const CatalogSurface& surface);

struct GaussImage {
    std::array<double, 3> normal{};
    double colatitude{0.0};
    double azimuth{0.0};
};

/// N(s, φ) = (-h' cos φ, -h' sin φ, r') with its sphere coordinates. Only the
/// catenoid is supported; other surfaces throw UnsupportedError.
GaussImage gauss_map(const CatalogSurface& surface, Vec2 point);

/// Cosine of the angle between the Gauss image of the trace and the sphere's
/// parallels, per sample.
InvariantReport gauss_image_angle(const Trace& trace, const CatalogSurface& surface,
                                  double tolerance = 1e-4);

/// Gaussian curvature -r''/r.
double gaussian_curvature(const CatalogSurface& surface, double s);

/// |dσ²(∂_s, ∂_φ) - (r'/r) σ¹∧σ²(∂_s, ∂_φ)| with dσ² from central differences of r.
double coframe_residual(const CatalogSurface& surface, double s);

/// M(s, φ) per sample.
std::vector<std::array<double, 3>> embed(const CatalogSurface& surface, const Trace& trace);
std::array<double, 3> embed_point(const CatalogSurface& surface, Vec2 point);

/// Catalog lookup by name ("sphere", "pseudosphere", "catenoid").
CatalogSurface surface_by_name(const std::string& name);

}  // namespace vtg
