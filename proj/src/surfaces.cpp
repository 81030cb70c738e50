/// @file surfaces.cpp
#include "vtg/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "vtg/errors.hpp"
#include "vtg/quadrature.hpp"

namespace vtg {

double natural_defect(const RevolutionProfile& profile, double s) {
    const ProfileJet j = profile.jet(s);
    return std::abs(j.dr * j.dr + j.dh * j.dh - 1.0);
}

namespace {

/// Arc length s(t) tabulated on panels by adaptive quadrature; inside a panel
/// it is completed with a fixed Gauss rule and inverted by safeguarded Newton.
class ArcLength {
public:
    static constexpr int kPanels = 4096;

    explicit ArcLength(ProfileCurve curve) : curve_(std::move(curve)) {
        const double width = (curve_.t_max - curve_.t_min) / kPanels;
        nodes_.resize(kPanels + 1);
        for (int i = 0; i <= kPanels; ++i) nodes_[i] = curve_.t_min + width * i;
        nodes_[kPanels] = curve_.t_max;
        s_.assign(kPanels + 1, 0.0);
        auto sp = [this](double x) { return speed(x); };
        for (int i = 1; i <= kPanels; ++i)
            s_[i] = s_[i - 1] + integrate_gk(sp, nodes_[i - 1], nodes_[i], 1e-12).value;
        const double offset = integrate_gk(sp, curve_.t_min, curve_.t_origin, 1e-12).value;
        for (double& v : s_) v -= offset;
    }

    double speed(double t) const {
        const auto r = curve_.r(t);
        const auto h = curve_.h(t);
        return std::hypot(r[1], h[1]);
    }

    double s_min() const { return s_.front(); }
    double s_max() const { return s_.back(); }

    /// t with s(t) = s, to 1e-10 or better.
    double invert(double s) const {
        const auto it = std::upper_bound(s_.begin(), s_.end(), s);
        const std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - s_.begin()), 1, kPanels) - 1;
        double lo = nodes_[i];
        double hi = nodes_[i + 1];
        auto sp = [this](double x) { return speed(x); };
        double t = lo + (hi - lo) * (s - s_[i]) / (s_[i + 1] - s_[i]);
        for (int it2 = 0; it2 < 60; ++it2) {
            const double f = s_[i] + integrate_gauss15(sp, nodes_[i], t) - s;
            if (f < 0.0) lo = t; else hi = t;
            double next = t - f / speed(t);
            if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - t) < 1e-15 * std::max(1.0, std::abs(t)) || f == 0.0) return next;
            t = next;
        }
        return t;
    }

    ProfileJet jet(double s) const {
        thread_local const ArcLength* owner = nullptr;
        thread_local double last_s = 0.0;
        thread_local ProfileJet last{};
        if (owner == this && last_s == s) return last;

        const double t = invert(s);
        const auto r = curve_.r(t);
        const auto h = curve_.h(t);
        const double q = std::hypot(r[1], h[1]);
        const double dq = (r[1] * r[2] + h[1] * h[2]) / q;
        ProfileJet j;
        j.r = r[0];
        j.h = h[0];
        j.dr = r[1] / q;
        j.dh = h[1] / q;
        j.ddr = (r[2] * q - r[1] * dq) / (q * q * q);
        owner = this;
        last_s = s;
        last = j;
        return j;
    }

private:
    ProfileCurve curve_;
    std::vector<double> nodes_;
    std::vector<double> s_;
};

}  // namespace

RevolutionProfile reparametrize_by_arclength(const ProfileCurve& curve) {
    auto arc = std::make_shared<const ArcLength>(curve);
    RevolutionProfile p;
    p.jet = [arc](double s) { return arc->jet(s); };
    p.natural = true;
    p.s_min = arc->s_min();
    p.s_max = arc->s_max();
    return p;
}

CatalogSurface make_surface_of_revolution(std::string name, RevolutionProfile profile,
                                          double mercator_anchor) {
    if (!profile.natural)
        throw ArgumentError("profile of '" + name +
                            "' is not in natural parametrization; reparametrize it by arc length");
    for (int i = 1; i < 100; ++i) {
        const double s = profile.s_min + (profile.s_max - profile.s_min) * i / 100.0;
        if (natural_defect(profile, s) > 1e-8)
            throw ArgumentError("profile of '" + name + "' fails r'^2 + h'^2 = 1 at s = " +
                                std::to_string(s));
        if (!(profile.jet(s).r > 0.0))
            throw ArgumentError("profile of '" + name + "' has r <= 0 at s = " + std::to_string(s));
    }

    CatalogSurface surf;
    surf.name = name;
    surf.profile = profile;
    surf.mercator_anchor = mercator_anchor;

    const auto jet = profile.jet;
    DomainBox box;
    box.u_min = profile.s_min;
    box.u_max = profile.s_max;
    surf.chart = ChartGeometry(
        name, {"s", "phi"}, box,
        [jet](Vec2 p) {
            const double r = jet(p.u).r;
            return Mat2::diag(1.0, r * r);
        },
        [jet](Vec2 p) {
            const ProfileJet j = jet(p.u);
            Christoffel g{};
            g[0][1][1] = -j.r * j.dr;
            g[1][0][1] = j.dr / j.r;
            g[1][1][0] = j.dr / j.r;
            return g;
        });

    surf.field.id = name + ":flat";
    surf.field.components = [jet](Vec2 p) {
        const ProfileJet j = jet(p.u);
        return Vec2{j.dr / j.r, 0.0};
    };
    surf.field.sigma = ScalarField{[jet](Vec2 p) { return -std::log(jet(p.u).r); },
                                   [jet](Vec2 p) {
                                       const ProfileJet j = jet(p.u);
                                       return Vec2{-j.dr / j.r, 0.0};
                                   }};

    surf.frame.e1 = [](Vec2) { return Vec2{1.0, 0.0}; };
    surf.frame.e2 = [jet](Vec2 p) { return Vec2{0.0, 1.0 / jet(p.u).r}; };
    return surf;
}

CatalogSurface make_sphere() {
    RevolutionProfile p;
    p.jet = [](double s) {
        return ProfileJet{std::sin(s), std::cos(s), -std::sin(s), std::cos(s), -std::sin(s)};
    };
    p.natural = true;
    p.s_min = 1e-3;
    p.s_max = std::numbers::pi - 1e-3;
    return make_surface_of_revolution("sphere", p, std::numbers::pi / 2.0);
}

CatalogSurface make_pseudosphere() {
    RevolutionProfile p;
    p.jet = [](double s) {
        const double e = std::exp(-s);
        const double w = std::sqrt(1.0 - e * e);
        return ProfileJet{e, -e, e, std::atanh(w) - w, w};
    };
    p.natural = true;
    p.s_min = 0.0;
    p.s_max = 8.0;
    return make_surface_of_revolution("pseudosphere", p, 4.0);
}

CatalogSurface make_catenoid() {
    ProfileCurve c;
    c.r = [](double t) {
        return std::array<double, 3>{std::cosh(t), std::sinh(t), std::cosh(t)};
    };
    c.h = [](double t) { return std::array<double, 3>{t, 1.0, 0.0}; };
    c.t_min = -std::asinh(10.0);
    c.t_max = std::asinh(10.0);
    c.t_origin = 0.0;
    RevolutionProfile p = reparametrize_by_arclength(c);
    // The endpoints come out of the quadrature; pin the box to the nominal range.
    p.s_min = std::max(p.s_min, -10.0);
    p.s_max = std::min(p.s_max, 10.0);
    return make_surface_of_revolution("catenoid", p, 0.0);
}

CatalogSurface surface_by_name(const std::string& name) {
    if (name == "sphere") return make_sphere();
    if (name == "pseudosphere") return make_pseudosphere();
    if (name == "catenoid") return make_catenoid();
    throw ArgumentError("unknown catalog surface '" + name + "'");
}

double mercator_increment(const CatalogSurface& surface, double a, double b) {
    const auto jet = surface.profile.jet;
    return integrate_gk([&jet](double s) { return 1.0 / jet(s).r; }, a, b, 1e-14).value;
}

double mercator_map(const CatalogSurface& surface, double s) {
    surface.chart.require_inside({s, 0.0});
    return mercator_increment(surface, surface.mercator_anchor, s);
}

Mat2 mercator_conformal_metric(const CatalogSurface& surface, double s) {
    surface.chart.require_inside({s, 0.0});
    const double h = fd_step(s);
    const double dyds = mercator_increment(surface, s - h, s + h) / (2.0 * h);
    const double r = surface.profile.jet(s).r;
    // g̃ = (1/r²) ds² + dφ²; with ds = dy / y'(s) the y-coefficient is 1 / (r y')².
    return Mat2::diag(1.0, 1.0 / (r * r * dyds * dyds));
}

GeodesicState loxodrome_launch(const CatalogSurface& surface, double s, double phi,
                               double angle_to_meridian, double energy) {
    const double r = surface.profile.jet(s).r;
    return {0.0,
            {s, phi},
            {energy * std::cos(angle_to_meridian), energy * std::sin(angle_to_meridian) / r}};
}

InvariantReport loxodrome_check(const Trace& trace, const CatalogSurface& surface,
                                double tolerance) {
    if (trace.meta.field_id != surface.field.id)
        throw ArgumentError("trace was not integrated with the flat connection of '" +
                            surface.name + "'");
    std::vector<double> values;
    values.reserve(trace.size());
    for (const auto& st : trace.states)
        values.push_back(surface.chart.inner(st.position, st.velocity, surface.frame.e2(st.position)) /
                         trace.meta.energy);
    return make_report("parallel_cosine", std::move(values), Gate::stddev, tolerance);
}

std::vector<Vec2> mercator_image(const Trace& trace, const CatalogSurface& surface) {
    std::vector<Vec2> pts;
    pts.reserve(trace.size());
    // Accumulate y along the trace instead of integrating from the anchor each time.
    double s_prev = trace.states.front().position.u;
    double y = mercator_map(surface, s_prev);
    for (const auto& st : trace.states) {
        y += mercator_increment(surface, s_prev, st.position.u);
        s_prev = st.position.u;
        pts.push_back({st.position.v, y});
    }
    return pts;
}

LineFit mercator_line_fit(const Trace& trace, const CatalogSurface& surface) {
    const auto pts = mercator_image(trace, surface);
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) { mx += p.u; my += p.v; }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
        sxx += (p.u - mx) * (p.u - mx);
        syy += (p.v - my) * (p.v - my);
        sxy += (p.u - mx) * (p.v - my);
    }
    // Principal direction of the scatter matrix.
    const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    LineFit fit;
    fit.slope = dir.v / dir.u;
    fit.intercept = my - fit.slope * mx;
    for (const auto& p : pts) {
        const double d = std::abs(-(p.u - mx) * dir.v + (p.v - my) * dir.u);
        fit.max_residual = std::max(fit.max_residual, d);
    }
    return fit;
}

GaussImage gauss_map(const CatalogSurface& surface, Vec2 point) {
    if (surface.name != "catenoid")
        throw UnsupportedError("Gauss map conformality is only certified for the catenoid");
    surface.chart.require_inside(point);
    const ProfileJet j = surface.profile.jet(point.u);
    GaussImage g;
    g.normal = {-j.dh * std::cos(point.v), -j.dh * std::sin(point.v), j.dr};
    g.colatitude = std::atan2(std::hypot(g.normal[0], g.normal[1]), g.normal[2]);
    g.azimuth = std::atan2(g.normal[1], g.normal[0]);
    return g;
}

InvariantReport gauss_image_angle(const Trace& trace, const CatalogSurface& surface,
                                  double tolerance) {
    std::vector<double> values;
    values.reserve(trace.size());
    for (const auto& st : trace.states) {
        const GaussImage img = gauss_map(surface, st.position);
        const ProfileJet j = surface.profile.jet(st.position.u);
        const double phi = st.position.v;
        const double ds = st.velocity.u;
        const double dphi = st.velocity.v;
        // h'' from r'r'' + h'h'' = 0 (natural parametrization).
        const double ddh = -j.dr * j.ddr / j.dh;
        const std::array<double, 3> dn{
            -ddh * ds * std::cos(phi) + j.dh * dphi * std::sin(phi),
            -ddh * ds * std::sin(phi) - j.dh * dphi * std::cos(phi),
            j.ddr * ds};
        const double th = img.colatitude;
        const double ps = img.azimuth;
        const std::array<double, 3> e_theta{std::cos(th) * std::cos(ps), std::cos(th) * std::sin(ps),
                                            -std::sin(th)};
        const std::array<double, 3> e_psi{-std::sin(ps), std::cos(ps), 0.0};
        double a = 0.0, b = 0.0;
        for (int i = 0; i < 3; ++i) {
            a += dn[i] * e_theta[i];
            b += dn[i] * e_psi[i];
        }
        values.push_back(b / std::hypot(a, b));
    }
    return make_report("gauss_image_parallel_cosine", std::move(values), Gate::stddev, tolerance);
}

double gaussian_curvature(const CatalogSurface& surface, double s) {
    const ProfileJet j = surface.profile.jet(s);
    return -j.ddr / j.r;
}

double coframe_residual(const CatalogSurface& surface, double s) {
    const double h = fd_step(s);
    // σ² = r dφ, so dσ²(∂_s, ∂_φ) = ∂_s r; σ¹∧σ²(∂_s, ∂_φ) = r.
    const double d_sigma2 = (surface.profile.jet(s + h).r - surface.profile.jet(s - h).r) / (2.0 * h);
    const ProfileJet j = surface.profile.jet(s);
    return std::abs(d_sigma2 - (j.dr / j.r) * j.r);
}

std::array<double, 3> embed_point(const CatalogSurface& surface, Vec2 point) {
    const ProfileJet j = surface.profile.jet(point.u);
    return {j.r * std::cos(point.v), j.r * std::sin(point.v), j.h};
}

std::vector<std::array<double, 3>> embed(const CatalogSurface& surface, const Trace& trace) {
    std::vector<std::array<double, 3>> out;
    out.reserve(trace.size());
    for (const auto& st : trace.states) out.push_back(embed_point(surface, st.position));
    return out;
}

}  // namespace vtg
