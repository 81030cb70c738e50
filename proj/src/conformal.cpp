/// @file conformal.cpp
#include "vtg/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vtg/errors.hpp"
#include "vtg/invariants.hpp"

namespace vtg {

ChartGeometry conformal_metric(const ChartGeometry& chart, const ScalarField& sigma) {
    auto metric = [chart, sigma](Vec2 p) {
        const Mat2 g = chart.metric(p);
        const double w = std::exp(2.0 * sigma(p));
        Mat2 out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out(i, j) = w * g(i, j);
        return out;
    };
    return ChartGeometry(chart.id() + "~conformal", chart.coordinate_names(), chart.domain(),
                         std::move(metric));
}

ConformalPair make_conformal_pair(const ChartGeometry& chart, const ScalarField& sigma) {
    return {chart, sigma, conformal_metric(chart, sigma)};
}

Christoffel predicted_conformal_christoffel(const ConformalPair& pair, Vec2 p) {
    Christoffel gamma = pair.base.christoffel(p);
    const Vec2 ds = differential(pair.sigma, p);
    const Vec2 grad = pair.base.grad(pair.sigma, p);
    const Mat2 g = pair.base.metric(p);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                gamma[k][i][j] += (k == j ? ds[i] : 0.0) + (k == i ? ds[j] : 0.0) - g(i, j) * grad[k];
    return gamma;
}

double conformal_christoffel_residual(const ConformalPair& pair, Vec2 p) {
    const Christoffel fd = pair.derived.christoffel_fd(p);
    const Christoffel predicted = predicted_conformal_christoffel(pair, p);
    double worst = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(fd[k][i][j] - predicted[k][i][j]));
    return worst;
}

Trace reparametrize(const Trace& trace, const ChartGeometry& chart, const VectorFieldSpec& field,
                    double dt) {
    if (!field.sigma) throw ArgumentError("field '" + field.id + "' is not a gradient field");
    if (trace.meta.field_id != field.id)
        throw ArgumentError("trace was integrated with field '" + trace.meta.field_id +
                            "', not '" + field.id + "'");
    if (trace.size() < 2) throw ArgumentError("trace needs at least two samples");
    if (!(dt > 0.0)) throw ArgumentError("reparametrization step must be > 0");

    const ScalarField& sigma = *field.sigma;
    const double tau_end = trace.back().t;
    auto rate = [&](double tau) { return std::exp(-sigma(sample_at(trace, tau).position)); };

    Trace out;
    out.meta = trace.meta;
    out.meta.chart_id = chart.id() + "~conformal";
    out.meta.field_id = "zero";
    out.meta.settings.t0 = 0.0;
    out.meta.settings.step = dt;
    out.meta.launch_index = 0;

    auto emit = [&](double t, double tau) {
        const GeodesicState s = sample_at(trace, tau);
        const double tau_dot = std::exp(-sigma(s.position));
        out.states.push_back({t, s.position, tau_dot * s.velocity});
    };

    double tau = trace.front().t;
    std::size_t k = 0;
    emit(0.0, tau);
    while (true) {
        const double k1 = rate(tau);
        const double k2 = rate(std::min(tau + 0.5 * dt * k1, tau_end));
        const double k3 = rate(std::min(tau + 0.5 * dt * k2, tau_end));
        const double k4 = rate(std::min(tau + dt * k3, tau_end));
        const double next = tau + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (next > tau_end) break;
        tau = next;
        ++k;
        emit(static_cast<double>(k) * dt, tau);
    }
    out.meta.settings.t1 = out.states.back().t;

    // The g̃-speed e^σ τ̇ |γ̇| equals E; diagnostics are recorded for the conformal metric.
    const ChartGeometry tilde = conformal_metric(chart, sigma);
    out.diagnostics.reserve(out.states.size());
    for (const auto& s : out.states) {
        StepDiagnostics d;
        d.speed = tilde.norm(s.position, s.velocity);
        out.diagnostics.push_back(d);
    }
    return out;
}

double levi_civita_residual(const Trace& trace, const ChartGeometry& chart) {
    const std::size_t n = trace.size();
    std::vector<double> t(n), du(n), dv(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = trace.states[i].t;
        du[i] = trace.states[i].velocity.u;
        dv[i] = trace.states[i].velocity.v;
    }
    const auto ddu = time_derivative(t, du);
    const auto ddv = time_derivative(t, dv);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = trace.states[i];
        const Vec2 r = Vec2{ddu[i], ddv[i]} + contract(chart.christoffel(s.position), s.velocity, s.velocity);
        worst = std::max(worst, euclid(r));
    }
    return worst;
}

namespace {

std::vector<Vec2> resample(const Trace& trace, std::size_t samples) {
    const auto& s = trace.states;
    std::vector<double> arc(s.size(), 0.0);
    for (std::size_t i = 1; i < s.size(); ++i)
        arc[i] = arc[i - 1] + euclid(s[i].position - s[i - 1].position);
    const double total = arc.back();
    std::vector<Vec2> out;
    out.reserve(samples);
    std::size_t seg = 1;
    for (std::size_t k = 0; k < samples; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(samples - 1);
        while (seg + 1 < s.size() && arc[seg] < target) ++seg;
        const double len = arc[seg] - arc[seg - 1];
        const double x = len > 0.0 ? std::clamp((target - arc[seg - 1]) / len, 0.0, 1.0) : 0.0;
        out.push_back(s[seg - 1].position + x * (s[seg].position - s[seg - 1].position));
    }
    return out;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.u * ab.u + ab.v * ab.v;
    double x = 0.0;
    if (len2 > 0.0) x = std::clamp(((p.u - a.u) * ab.u + (p.v - a.v) * ab.v) / len2, 0.0, 1.0);
    return euclid(p - (a + x * ab));
}

double directed(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double worst = 0.0;
    for (const Vec2 p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < to.size(); ++i)
            best = std::min(best, point_segment_distance(p, to[i - 1], to[i]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double compare_point_sets(const Trace& a, const Trace& b, std::size_t samples) {
    if (a.size() < 2 || b.size() < 2) throw ArgumentError("point-set comparison needs traces of >= 2 points");
    if (samples < 2) throw ArgumentError("need at least two resampling points");
    const auto pa = resample(a, samples);
    const auto pb = resample(b, samples);
    return std::max(directed(pa, pb), directed(pb, pa));
}

double conformal_length(const Trace& trace, const ChartGeometry& chart, const ScalarField& sigma) {
    const std::size_t n = trace.size();
    if (n < 2) return 0.0;
    std::vector<double> t(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = trace.states[i];
        t[i] = s.t;
        f[i] = std::exp(sigma(s.position)) * chart.norm(s.position, s.velocity);
    }
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) sum += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    // Euler-Maclaurin end correction; exact to O(h^4) on uniform grids.
    if (n >= 5) {
        const auto df = time_derivative(t, f);
        const double h0 = t[1] - t[0];
        const double h1 = t[n - 1] - t[n - 2];
        sum -= (h1 * h1 * df[n - 1] - h0 * h0 * df[0]) / 12.0;
    }
    return sum;
}

Vec2 rotate_tangent(const ChartGeometry& chart, Vec2 p, Vec2 w, double angle) {
    const Vec2 eu{1.0, 0.0};
    const Vec2 f1 = (1.0 / chart.norm(p, eu)) * eu;
    Vec2 f2 = Vec2{0.0, 1.0} - chart.inner(p, Vec2{0.0, 1.0}, f1) * f1;
    f2 = (1.0 / chart.norm(p, f2)) * f2;
    const double a = chart.inner(p, w, f1);
    const double b = chart.inner(p, w, f2);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return (c * a - s * b) * f1 + (s * a + c * b) * f2;
}

EquivalenceResult conformal_equivalence(const ChartGeometry& chart, const VectorFieldSpec& field,
                                        const GeodesicState& launch,
                                        const IntegratorSettings& settings, double angle_offset) {
    if (!field.sigma) throw ArgumentError("field '" + field.id + "' is not a gradient field");
    EquivalenceResult r;
    r.nabla = integrate(chart, field, launch, settings);
    r.tilde_length = conformal_length(r.nabla, chart, *field.sigma);

    const ChartGeometry tilde = conformal_metric(chart, *field.sigma);
    const Vec2 p = launch.position;
    Vec2 w = rotate_tangent(chart, p, launch.velocity, angle_offset);
    w = (1.0 / tilde.norm(p, w)) * w;

    IntegratorSettings ts = settings;
    ts.t0 = 0.0;
    ts.t1 = r.tilde_length;
    r.tilde = levi_civita_integrate(tilde, GeodesicState{0.0, p, w}, ts);
    r.distance = compare_point_sets(r.nabla, r.tilde);
    return r;
}

}  // namespace vtg
