/// @file invariants.cpp
#include "vtg/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

void require_same_field(const Trace& trace, const VectorFieldSpec& field) {
    if (trace.meta.field_id != field.id)
        throw ArgumentError("trace was integrated with field '" + trace.meta.field_id +
                            "', not '" + field.id + "'");
}

/// Weights of the derivative at x0 of the Lagrange interpolant through xs.
std::vector<double> derivative_weights(const std::vector<double>& xs, double x0) {
    const std::size_t m = xs.size();
    std::vector<double> w(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == j) continue;
            double prod = 1.0 / (xs[j] - xs[k]);
            for (std::size_t l = 0; l < m; ++l) {
                if (l == j || l == k) continue;
                prod *= (x0 - xs[l]) / (xs[j] - xs[l]);
            }
            sum += prod;
        }
        w[j] = sum;
    }
    return w;
}

}  // namespace

InvariantReport make_report(std::string name, std::vector<double> values, Gate gate,
                            double tolerance, std::optional<double> reference) {
    InvariantReport r;
    r.name = std::move(name);
    r.gate = gate;
    r.tolerance = tolerance;
    if (!values.empty()) {
        const double ref = reference.value_or(values.front());
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                            static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) {
            r.max_deviation = std::max(r.max_deviation, std::abs(v - ref));
            var += (v - mean) * (v - mean);
        }
        r.stddev = std::sqrt(var / static_cast<double>(values.size()));
    }
    r.values = std::move(values);
    const double statistic = gate == Gate::stddev ? r.stddev : r.max_deviation;
    r.pass = !r.values.empty() && statistic < tolerance;
    return r;
}

std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& f) {
    if (t.size() != f.size()) throw ArgumentError("time and value series differ in length");
    const std::size_t n = t.size();
    if (n < 2) throw ArgumentError("need at least two samples to differentiate");
    const std::size_t m = std::min<std::size_t>(5, n);
    std::vector<double> out(n);
    std::vector<double> xs(m);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t start = i >= m / 2 ? i - m / 2 : 0;
        start = std::min(start, n - m);
        for (std::size_t j = 0; j < m; ++j) xs[j] = t[start + j];
        const auto w = derivative_weights(xs, t[i]);
        double d = 0.0;
        for (std::size_t j = 0; j < m; ++j) d += w[j] * f[start + j];
        out[i] = d;
    }
    return out;
}

InvariantReport speed_report(const Trace& trace, double tolerance) {
    std::vector<double> drift;
    drift.reserve(trace.size());
    const double e = trace.meta.energy;
    for (const auto& d : trace.diagnostics) drift.push_back(std::abs(d.speed - e) / e);
    return make_report("speed_drift", std::move(drift), Gate::max_deviation, tolerance, 0.0);
}

std::vector<double> curvature_general(const Trace& trace, const ChartGeometry& chart,
                                      const VectorFieldSpec& field) {
    require_same_field(trace, field);
    const double e2 = trace.meta.energy * trace.meta.energy;
    std::vector<double> kappa;
    kappa.reserve(trace.size());
    for (const auto& s : trace.states) {
        const Vec2 v = field(s.position);
        const double vv = chart.inner(s.position, v, v);
        const double gv = chart.inner(s.position, v, s.velocity);
        kappa.push_back(std::sqrt(std::max(0.0, vv - gv * gv / e2)));
    }
    return kappa;
}

std::vector<double> kinematic_curvature(const Trace& trace, const ChartGeometry& chart) {
    const std::size_t n = trace.size();
    std::vector<double> t(n), du(n), dv(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = trace.states[i].t;
        du[i] = trace.states[i].velocity.u;
        dv[i] = trace.states[i].velocity.v;
    }
    const auto ddu = time_derivative(t, du);
    const auto ddv = time_derivative(t, dv);
    const double e2 = trace.meta.energy * trace.meta.energy;
    std::vector<double> kappa(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = trace.states[i];
        const Vec2 cov = Vec2{ddu[i], ddv[i]} + contract(chart.christoffel(s.position), s.velocity,
                                                          s.velocity);
        kappa[i] = chart.norm(s.position, cov) / e2;
    }
    return kappa;
}

KillingCheck killing_curvature_check(const Trace& trace, const ChartGeometry& chart,
                                     const VectorFieldSpec& field) {
    if (!field.killing) throw ArgumentError("field '" + field.id + "' is not flagged Killing");
    require_same_field(trace, field);
    const std::size_t n = trace.size();
    KillingCheck out;
    std::vector<double> t(n);
    out.g_v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = trace.states[i];
        t[i] = s.t;
        out.g_v[i] = chart.inner(s.position, field(s.position), s.velocity);
    }
    const auto kappa = curvature_general(trace, chart, field);
    const auto dg = time_derivative(t, out.g_v);
    const double e2 = trace.meta.energy * trace.meta.energy;
    for (std::size_t i = 0; i < n; ++i)
        out.max_residual = std::max(out.max_residual, std::abs(dg[i] + e2 * kappa[i] * kappa[i]));
    out.max_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i)
        out.max_increase = std::max(out.max_increase, out.g_v[i] - out.g_v[i - 1]);
    if (n < 2) out.max_increase = 0.0;
    out.monotone = out.max_increase <= 1e-8;
    out.pass = out.monotone && out.max_residual < 1e-4;
    return out;
}

InvariantReport conformal_constant(const Trace& trace, const ChartGeometry& chart,
                                   const ScalarField& sigma, const std::function<Vec2(Vec2)>& x,
                                   double tolerance) {
    std::vector<double> values;
    values.reserve(trace.size());
    for (const auto& s : trace.states)
        values.push_back(std::exp(sigma(s.position)) * chart.inner(s.position, s.velocity, x(s.position)));
    return make_report("conformal_constant", std::move(values), Gate::stddev, tolerance);
}

Isometry identity_isometry() {
    return {[](Vec2 p) { return p; }, [](Vec2, Vec2 w) { return w; }};
}

Isometry rotation_about_origin(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    auto rot = [c, s](Vec2 w) { return Vec2{c * w.u - s * w.v, s * w.u + c * w.v}; };
    return {rot, [rot](Vec2, Vec2 w) { return rot(w); }};
}

Isometry translation(Vec2 offset) {
    return {[offset](Vec2 p) { return p + offset; }, [](Vec2, Vec2 w) { return w; }};
}

double killing_flow_symmetry(const Trace& trace, const ChartGeometry& chart,
                             const VectorFieldSpec& field, const Isometry& isometry) {
    require_same_field(trace, field);
    if (trace.size() == 0) throw ArgumentError("empty trace");

    const std::size_t n = trace.size();
    for (std::size_t k = 0; k < 20; ++k) {
        const Vec2 p = trace.states[(k * (n - 1)) / 19].position;
        const Vec2 lhs = isometry.push(p, field(p));
        const Vec2 rhs = field(isometry.map(p));
        if (euclid(lhs - rhs) > 1e-8 * std::max(1.0, euclid(rhs)))
            throw ArgumentError("isometry does not preserve the vector field");
    }

    const GeodesicState& launch = trace.states[trace.meta.launch_index];
    GeodesicState mapped{launch.t, isometry.map(launch.position),
                         isometry.push(launch.position, launch.velocity)};
    IntegratorSettings settings = trace.meta.settings;
    settings.t0 = launch.t;
    const Trace image =
        integrate_both_ways(chart, field, mapped, settings, trace.front().t, trace.back().t);

    double worst = 0.0;
    for (const auto& s : trace.states) {
        if (s.t < image.front().t || s.t > image.back().t) continue;
        const Vec2 expected = isometry.map(s.position);
        worst = std::max(worst, euclid(sample_at(image, s.t).position - expected));
    }
    return worst;
}

}  // namespace vtg
