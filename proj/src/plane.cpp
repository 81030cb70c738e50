/// @file plane.cpp
#include "vtg/plane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vtg/errors.hpp"
#include "vtg/quadrature.hpp"

namespace vtg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

Christoffel flat_christoffel(Vec2) { return Christoffel{}; }

}  // namespace

ChartGeometry euclidean_plane() {
    return ChartGeometry("plane", {"x", "y"}, DomainBox{},
                         [](Vec2) { return Mat2::diag(1.0, 1.0); }, flat_christoffel);
}

ChartGeometry upper_half_plane() {
    DomainBox box;
    box.v_min = 0.0;
    return ChartGeometry("half-plane", {"x", "y"}, box, [](Vec2) { return Mat2::diag(1.0, 1.0); },
                         flat_christoffel);
}

VectorFieldSpec PlaneField::to_vector_field() const {
    VectorFieldSpec v;
    v.id = id;
    v.components = [f = f, g = g](Vec2 p) { return Vec2{f(p.u, p.v), g(p.u, p.v)}; };
    v.plane_potential = potential;
    v.killing = killing;
    return v;
}

double PlaneField::curvature_density(double x, double y) const {
    const double hx = fd_step(x);
    const double hy = fd_step(y);
    const double fx = (f(x + hx, y) - f(x - hx, y)) / (2.0 * hx);
    const double gy = (g(x, y + hy) - g(x, y - hy)) / (2.0 * hy);
    return -(fx + gy);
}

PlaneField winding_field() {
    PlaneField w;
    w.id = "winding";
    w.f = [](double, double y) { return -y; };
    w.g = [](double x, double) { return x; };
    w.potential = ScalarField{[](Vec2 p) { return -(p.u * p.u + p.v * p.v) / 2.0; },
                              [](Vec2 p) { return Vec2{-p.u, -p.v}; }};
    w.killing = true;
    return w;
}

PlaneField shear_field() {
    PlaneField s;
    s.id = "shear";
    s.f = [](double, double y) { return y; };
    s.g = [](double, double) { return 0.0; };
    s.potential = ScalarField{[](Vec2 p) { return p.v * p.v / 2.0; },
                              [](Vec2 p) { return Vec2{0.0, p.v}; }};
    return s;
}

PlaneField zero_plane_field() {
    PlaneField z;
    z.id = "zero";
    z.f = [](double, double) { return 0.0; };
    z.g = [](double, double) { return 0.0; };
    z.potential = ScalarField{[](Vec2) { return 0.0; }, [](Vec2) { return Vec2{}; }};
    z.killing = true;
    return z;
}

VectorFieldSpec half_plane_sigma_field() {
    VectorFieldSpec v;
    v.id = "half-plane:sigma";
    v.components = [](Vec2 p) { return Vec2{0.0, 1.0 / p.v}; };
    v.sigma = ScalarField{[](Vec2 p) { return -std::log(p.v); },
                          [](Vec2 p) { return Vec2{0.0, -1.0 / p.v}; }};
    return v;
}

double plane_curvature(const PlaneField& field, const GeodesicState& state) {
    const double x = state.position.u;
    const double y = state.position.v;
    return field.f(x, y) * state.velocity.v - field.g(x, y) * state.velocity.u;
}

std::vector<double> signed_kinematic_curvature(const Trace& trace) {
    const std::size_t n = trace.size();
    std::vector<double> t(n), dx(n), dy(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = trace.states[i].t;
        dx[i] = trace.states[i].velocity.u;
        dy[i] = trace.states[i].velocity.v;
    }
    const auto ddx = time_derivative(t, dx);
    const auto ddy = time_derivative(t, dy);
    std::vector<double> kappa(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sp = std::hypot(dx[i], dy[i]);
        kappa[i] = (dx[i] * ddy[i] - dy[i] * ddx[i]) / (sp * sp * sp);
    }
    return kappa;
}

FlatInvariantReport flat_invariant(const Trace& trace, const PlaneField& field, double tol) {
    if (!field.potential) throw ArgumentError("field '" + field.id + "' has no flat potential p");
    if (trace.meta.field_id != field.id)
        throw ArgumentError("trace was integrated with field '" + trace.meta.field_id + "'");
    FlatInvariantReport r;
    r.values.reserve(trace.size());
    for (const auto& s : trace.states) {
        const std::complex<double> zdot{s.velocity.u, s.velocity.v};
        const double p = (*field.potential)(s.position);
        r.values.push_back(zdot * std::polar(1.0, -p));
        r.max_modulus_error = std::max(r.max_modulus_error, std::abs(std::abs(zdot) - 1.0));
    }
    r.z0 = r.values[trace.meta.launch_index];
    for (const auto& v : r.values) r.max_deviation = std::max(r.max_deviation, std::abs(v - r.z0));
    r.pass = r.max_deviation < tol && r.max_modulus_error < tol;
    return r;
}

double arcsin_constant(double y0, double ydot0, double xdot0) {
    const int sign = xdot0 < 0.0 ? -1 : 1;
    return sign * y0 * y0 / 2.0 - std::atan2(ydot0, std::abs(xdot0));
}

ArcsinReport arcsin_invariant(const Trace& trace, double tol) {
    ArcsinReport r;
    const std::size_t n = trace.size();
    r.values.assign(n, std::numeric_limits<double>::quiet_NaN());

    auto close = [&](std::size_t begin, std::size_t end, int sign) {
        if (end <= begin) return;
        BranchSegment seg{begin, end, sign, 0.0, 0.0};
        for (std::size_t i = begin; i < end; ++i) seg.mean += r.values[i];
        seg.mean /= static_cast<double>(end - begin);
        double var = 0.0;
        for (std::size_t i = begin; i < end; ++i) var += (r.values[i] - seg.mean) * (r.values[i] - seg.mean);
        seg.stddev = std::sqrt(var / static_cast<double>(end - begin));
        r.max_segment_stddev = std::max(r.max_segment_stddev, seg.stddev);
        r.segments.push_back(seg);
    };

    std::size_t begin = 0;
    int current = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = trace.states[i];
        const double xd = s.velocity.u;
        const double yd = s.velocity.v;
        if (std::abs(yd) > 1.0 + 1e-9)
            throw NumericalDomainError("|dy/dt| = " + std::to_string(std::abs(yd)) +
                                       " exceeds 1; the trace is not unit speed");
        if (std::abs(xd) < 1e-9) {
            close(begin, i, current);
            current = 0;
            begin = i + 1;
            continue;
        }
        const int sign = xd > 0.0 ? 1 : -1;
        if (current != 0 && sign != current) {
            close(begin, i, current);
            const auto& prev = trace.states[i - 1];
            const double x0 = prev.velocity.u;
            r.switch_times.push_back(prev.t + (s.t - prev.t) * x0 / (x0 - xd));
            begin = i;
        } else if (current == 0) {
            begin = i;
        }
        current = sign;
        r.values[i] = sign * s.position.v * s.position.v / 2.0 - std::atan2(yd, std::abs(xd));
    }
    close(begin, n, current);
    r.pass = !r.segments.empty() && r.max_segment_stddev < tol;
    return r;
}

namespace {

/// Squared heights y² = 2·branch·(c + kπ) ≥ 0 of singular levels, as a
/// progression starting at `first` with spacing 2π.
struct LevelLattice {
    double first{0.0};

    static LevelLattice of(double c, int branch) {
        // branch·(c + kπ) >= 0 with the smallest such value.
        const double base = branch * c;  // levels are 2(base + m π), m integer
        const double m = std::ceil(-base / kPi - 1e-15);
        double first = 2.0 * (base + m * kPi);
        if (first < 0.0) first += 2.0 * kPi;
        return {first};
    }

    /// Largest level strictly below q (NaN if none) and smallest level strictly above q.
    std::pair<double, double> around(double q) const {
        const double k = std::floor((q - first) / (2.0 * kPi));
        double below = first + k * 2.0 * kPi;
        double above = below + 2.0 * kPi;
        if (below >= q) { above = below; below -= 2.0 * kPi; }
        if (below < first - 1e-12) below = std::numeric_limits<double>::quiet_NaN();
        if (above <= q) above += 2.0 * kPi;
        return {below, above};
    }
};

double level_residual(double y, double c, int branch) {
    return std::abs(std::sin(branch * y * y / 2.0 - c));
}

}  // namespace

StripBounds strip_bounds(double y0, double ydot0, double xdot0) {
    StripBounds b;
    b.branch = xdot0 < 0.0 ? -1 : 1;
    b.c = arcsin_constant(y0, ydot0, xdot0);
    if (std::abs(ydot0) < 1e-14) {
        b.degenerate = true;
        b.lower = b.upper = y0;
        return b;
    }
    const LevelLattice lattice = LevelLattice::of(b.c, b.branch);
    const double q = y0 * y0;
    const auto [below, above] = lattice.around(q);
    const double mag_above = std::sqrt(above);
    if (y0 >= 0.0) {
        b.upper = mag_above;
        b.lower = std::isnan(below) ? -std::sqrt(lattice.first) : std::sqrt(below);
    } else {
        b.lower = -mag_above;
        b.upper = std::isnan(below) ? std::sqrt(lattice.first) : -std::sqrt(below);
    }
    if (!std::isfinite(b.lower)) b.lower = -kInf;
    if (!std::isfinite(b.upper)) b.upper = kInf;
    return b;
}

StripQuadrature strip_quadrature(double y0, double y, double c, int branch) {
    if (y == y0) return {};
    if (branch != 1 && branch != -1) throw ArgumentError("branch must be +1 or -1");
    const double lo = std::min(y0, y);
    const double hi = std::max(y0, y);
    const double orientation = y > y0 ? 1.0 : -1.0;

    // Singular levels strictly between the endpoints.
    const LevelLattice lattice = LevelLattice::of(c, branch);
    auto level_inside = [&](double a, double b) {
        // any ±sqrt(L) in (a, b)?
        for (double sgn : {-1.0, 1.0}) {
            const double qa = sgn > 0 ? std::max(a, 0.0) : std::max(-b, 0.0);
            const double qb = sgn > 0 ? std::max(b, 0.0) : std::max(-a, 0.0);
            if (qb <= qa) continue;
            if (lattice.around(qa * qa).second < qb * qb) return true;
            if (qa == 0.0 && lattice.first == 0.0) return true;
        }
        return false;
    };

    if (level_residual(y, c, branch) < 1e-12 || level_residual(y0, c, branch) < 1e-12)
        return {kDivergentTime, 0.0, true};
    if (level_inside(lo, hi)) throw ArgumentError("a singular level lies between y0 and y");

    auto integrand = [c, branch](double s) { return 1.0 / std::sin(branch * s * s / 2.0 - c); };

    // Distance from an endpoint to the nearest singular level outside the interval.
    auto gap = [&](double e) {
        double best = kInf;
        const double q = e * e;
        const auto [below, above] = lattice.around(q);
        for (double L : {below, above, lattice.first}) {
            if (std::isnan(L)) continue;
            const double m = std::sqrt(L);
            best = std::min({best, std::abs(std::abs(e) - m), std::abs(e) + m});
        }
        return best;
    };

    // Graded partition: halve toward each endpoint until the piece is no longer
    // than the distance to the singularity beyond it.
    const double width = hi - lo;
    std::vector<double> cuts{lo, hi};
    for (double d = 0.5 * width; d > gap(hi) && d > 1e-300; d *= 0.5) cuts.push_back(hi - d);
    for (double d = 0.5 * width; d > gap(lo) && d > 1e-300; d *= 0.5) cuts.push_back(lo + d);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    StripQuadrature out;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const QuadratureValue q = integrate_gk(integrand, cuts[i - 1], cuts[i], 1e-10);
        out.t += q.value;
        out.error += q.error;
    }
    out.t *= orientation;
    return out;
}

double time_at_height(const Trace& trace, double y) {
    const auto& s = trace.states;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double a = s[i - 1].position.v - y;
        const double b = s[i].position.v - y;
        if (a == 0.0) return s[i - 1].t;
        if ((a < 0.0) != (b < 0.0) || b == 0.0) {
            double lo = s[i - 1].t;
            double hi = s[i].t;
            for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double m = sample_at(trace, mid).position.v - y;
                if ((m < 0.0) == (a < 0.0)) lo = mid; else hi = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    throw ArgumentError("trace does not reach height " + std::to_string(y));
}

ShootingSweep shooting_sweep(Vec2 origin, Vec2 target, std::size_t angles, double horizon,
                             double step, double hit_radius) {
    if (angles == 0) throw ArgumentError("need at least one launch angle");
    const ChartGeometry plane = euclidean_plane();
    const VectorFieldSpec field = shear_field().to_vector_field();
    IntegratorSettings settings;
    settings.step = step;
    settings.t0 = 0.0;

    ShootingSweep out;
    out.launches = angles;
    out.min_distance_to_target = kInf;
    for (std::size_t k = 0; k < angles; ++k) {
        const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(angles);
        const GeodesicState launch{0.0, origin, {std::cos(theta), std::sin(theta)}};
        const StripBounds strip = strip_bounds(origin.v, launch.velocity.v, launch.velocity.u);
        out.reachable_bound =
            std::max({out.reachable_bound, std::abs(strip.lower), std::abs(strip.upper)});
        const Trace tr = integrate_both_ways(plane, field, launch, settings, -horizon, horizon);
        for (const auto& s : tr.states) {
            const double y = s.position.v;
            out.max_abs_y = std::max(out.max_abs_y, std::abs(y));
            out.max_strip_excess =
                std::max({out.max_strip_excess, y - strip.upper, strip.lower - y});
            out.min_distance_to_target =
                std::min(out.min_distance_to_target, euclid(s.position - target));
        }
    }
    out.target_reached = out.min_distance_to_target < hit_radius ||
                         out.max_abs_y >= std::abs(target.v);
    return out;
}

}  // namespace vtg
