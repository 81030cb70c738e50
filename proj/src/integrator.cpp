/// @file integrator.cpp
#include "vtg/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

/// Phase-space point (u, v, du, dv).
using Phase = std::array<double, 4>;

Phase operator+(const Phase& a, const Phase& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
Phase operator*(double s, const Phase& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

Phase to_phase(const GeodesicState& s) {
    return {s.position.u, s.position.v, s.velocity.u, s.velocity.v};
}
GeodesicState to_state(double t, const Phase& y) { return {t, {y[0], y[1]}, {y[2], y[3]}}; }

constexpr double kExitTimeTolerance = 1e-9;

class Stepper {
public:
    Stepper(const ChartGeometry& chart, const VectorFieldSpec& field, double energy)
        : chart_(chart), field_(field), energy_(energy) {}

    Phase deriv(const Phase& y) const {
        const GeodesicState s = to_state(0.0, y);
        const Vec2 acc = geodesic_rhs(chart_, field_, s, energy_);
        return {y[2], y[3], acc.u, acc.v};
    }

    Phase rk4(const Phase& y, double h) const {
        const Phase k1 = deriv(y);
        const Phase k2 = deriv(y + (0.5 * h) * k1);
        const Phase k3 = deriv(y + (0.5 * h) * k2);
        const Phase k4 = deriv(y + h * k3);
        Phase out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        chart_.require_inside({out[0], out[1]});
        return out;
    }

    /// Dormand-Prince 5(4); returns the 5th-order solution and the scaled error norm.
    std::pair<Phase, double> dopri(const Phase& y, double h, double rtol, double atol) const {
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                                a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                                a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                                a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        static constexpr double e1 = b1 - 5179.0 / 57600.0, e3 = b3 - 7571.0 / 16695.0,
                                e4 = b4 - 393.0 / 640.0, e5 = b5 + 92097.0 / 339200.0,
                                e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

        const Phase k1 = deriv(y);
        const Phase k2 = deriv(y + (h * a21) * k1);
        const Phase k3 = deriv(y + h * (a31 * k1 + a32 * k2));
        const Phase k4 = deriv(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Phase k5 = deriv(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Phase k6 = deriv(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Phase out = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        chart_.require_inside({out[0], out[1]});
        const Phase k7 = deriv(out);
        const Phase err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(out[i]));
            sum += (err[i] / scale) * (err[i] / scale);
        }
        return {out, std::sqrt(sum / 4.0)};
    }

private:
    const ChartGeometry& chart_;
    const VectorFieldSpec& field_;
    double energy_;
};

/// Largest |h'| <= |h| (same sign) for which `attempt(h')` does not leave the domain.
template <class Attempt>
double feasible_step(double h, Attempt&& attempt) {
    double lo = 0.0;
    double hi = std::abs(h);
    const double sign = h < 0.0 ? -1.0 : 1.0;
    while (hi - lo > kExitTimeTolerance) {
        const double mid = 0.5 * (lo + hi);
        try {
            attempt(sign * mid);
            lo = mid;
        } catch (const DomainError&) {
            hi = mid;
        }
    }
    return sign * lo;
}

}  // namespace

void IntegratorSettings::validate() const {
    if (!(step > 0.0)) throw ArgumentError("integrator step must be > 0");
    if (method == Method::rk45 && (!(rtol > 0.0) || !(atol > 0.0)))
        throw ArgumentError("integrator tolerances must be > 0");
    if (!std::isfinite(t0) || !std::isfinite(t1)) throw ArgumentError("time span must be finite");
    if (max_steps == 0) throw ArgumentError("max_steps must be > 0");
}

const char* to_string(Method m) { return m == Method::rk4 ? "rk4" : "rk45"; }

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::reached_end: return "reached_end";
        case StopReason::max_steps: return "max_steps";
        case StopReason::boundary: return "boundary";
    }
    return "unknown";
}

const GeodesicState& Trace::end_state() const {
    return meta.settings.t1 < meta.settings.t0 ? states.front() : states.back();
}

Vec2 geodesic_rhs(const ChartGeometry& chart, const VectorFieldSpec& field,
                  const GeodesicState& state, double energy) {
    const Vec2 x = state.position;
    const Vec2 dx = state.velocity;
    const Vec2 v = field(x);
    const double gv = chart.inner(x, v, dx);
    return -contract(chart.christoffel(x), dx, dx) - (energy * energy) * v + gv * dx;
}

StepDiagnostics diagnose(const ChartGeometry& chart, const VectorFieldSpec& field,
                         const GeodesicState& state, double energy) {
    const Vec2 x = state.position;
    const Vec2 dx = state.velocity;
    const Vec2 acc = geodesic_rhs(chart, field, state, energy);
    const Vec2 covariant = acc + contract(chart.christoffel(x), dx, dx);
    StepDiagnostics d;
    d.speed = chart.norm(x, dx);
    d.kappa = chart.norm(x, covariant) / (energy * energy);
    d.g_v = chart.inner(x, field(x), dx);
    return d;
}

Trace integrate(const ChartGeometry& chart, const VectorFieldSpec& field,
                const GeodesicState& initial, const IntegratorSettings& settings) {
    settings.validate();
    chart.require_inside(initial.position);
    const double energy = chart.norm(initial.position, initial.velocity);
    if (!(energy > 0.0)) throw ArgumentError("launch velocity must be nonzero");

    Trace trace;
    trace.meta.chart_id = chart.id();
    trace.meta.field_id = field.id;
    trace.meta.energy = energy;
    trace.meta.settings = settings;

    const Stepper stepper(chart, field, energy);
    const double direction = settings.t1 < settings.t0 ? -1.0 : 1.0;
    const double span = std::abs(settings.t1 - settings.t0);

    double t = settings.t0;
    Phase y = to_phase(initial);
    auto record = [&](double time, const Phase& state) {
        const GeodesicState s = to_state(time, state);
        trace.states.push_back(s);
        trace.diagnostics.push_back(diagnose(chart, field, s, energy));
    };
    record(t, y);

    double h = settings.step;
    std::size_t steps = 0;
    StopReason stop = StopReason::reached_end;
    const double end_slack = 1e-12 * std::max(1.0, span);

    while (true) {
        const double remaining = span - std::abs(t - settings.t0);
        if (remaining <= end_slack) break;
        if (steps >= settings.max_steps) {
            stop = StopReason::max_steps;
            break;
        }
        const bool last = h >= remaining;
        const double hs = direction * std::min(h, remaining);

        if (settings.method == Method::rk4) {
            try {
                y = stepper.rk4(y, hs);
                t = last ? settings.t1
                         : settings.t0 + direction * static_cast<double>(steps + 1) * h;
                record(t, y);
                ++steps;
            } catch (const DomainError&) {
                const double hf = feasible_step(hs, [&](double s) { stepper.rk4(y, s); });
                if (hf != 0.0) {
                    y = stepper.rk4(y, hf);
                    t += hf;
                    record(t, y);
                }
                stop = StopReason::boundary;
                break;
            }
            continue;
        }

        // rk45
        try {
            const auto [next, err] = stepper.dopri(y, hs, settings.rtol, settings.atol);
            const double factor =
                err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                y = next;
                t = last ? settings.t1 : t + hs;
                record(t, y);
                ++steps;
            }
            h = std::abs(hs) * factor;
        } catch (const DomainError&) {
            const double hf = feasible_step(
                hs, [&](double s) { stepper.dopri(y, s, settings.rtol, settings.atol); });
            if (std::abs(hf) <= kExitTimeTolerance) {
                stop = StopReason::boundary;
                break;
            }
            const auto [next, err] = stepper.dopri(y, hf, settings.rtol, settings.atol);
            if (err <= 1.0) {
                y = next;
                t += hf;
                record(t, y);
                stop = StopReason::boundary;
                break;
            }
            h = std::abs(hf) * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        }
    }

    trace.meta.stop = stop;
    if (direction < 0.0) {
        std::reverse(trace.states.begin(), trace.states.end());
        std::reverse(trace.diagnostics.begin(), trace.diagnostics.end());
        trace.meta.launch_index = trace.states.size() - 1;
    }
    return trace;
}

Trace levi_civita_integrate(const ChartGeometry& chart, const GeodesicState& initial,
                            const IntegratorSettings& settings) {
    static const VectorFieldSpec none = zero_field();
    return integrate(chart, none, initial, settings);
}

Trace integrate_both_ways(const ChartGeometry& chart, const VectorFieldSpec& field,
                          const GeodesicState& initial, IntegratorSettings settings, double t_min,
                          double t_max) {
    if (!(t_min <= settings.t0 && settings.t0 <= t_max))
        throw ArgumentError("launch time must lie inside [t_min, t_max]");
    settings.t1 = t_min;
    Trace back = integrate(chart, field, initial, settings);
    settings.t1 = t_max;
    Trace fwd = integrate(chart, field, initial, settings);

    Trace out;
    out.meta = fwd.meta;
    out.meta.settings.t1 = t_max;
    out.meta.launch_index = back.size() - 1;
    out.states = std::move(back.states);
    out.diagnostics = std::move(back.diagnostics);
    out.states.insert(out.states.end(), fwd.states.begin() + 1, fwd.states.end());
    out.diagnostics.insert(out.diagnostics.end(), fwd.diagnostics.begin() + 1,
                           fwd.diagnostics.end());
    if (back.meta.stop == StopReason::boundary || fwd.meta.stop == StopReason::boundary)
        out.meta.stop = StopReason::boundary;
    else if (back.meta.stop == StopReason::max_steps || fwd.meta.stop == StopReason::max_steps)
        out.meta.stop = StopReason::max_steps;
    return out;
}

GeodesicState sample_at(const Trace& trace, double t) {
    if (trace.states.empty()) throw ArgumentError("cannot sample an empty trace");
    const auto& s = trace.states;
    if (t <= s.front().t) return s.front();
    if (t >= s.back().t) return s.back();
    const auto it = std::upper_bound(s.begin(), s.end(), t,
                                     [](double x, const GeodesicState& st) { return x < st.t; });
    const GeodesicState& a = *(it - 1);
    const GeodesicState& b = *it;
    const double dt = b.t - a.t;
    const double x = (t - a.t) / dt;
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x;
    const double h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
    const double d00 = (6 * x2 - 6 * x) / dt, d10 = 3 * x2 - 4 * x + 1;
    const double d01 = (-6 * x2 + 6 * x) / dt, d11 = 3 * x2 - 2 * x;

    GeodesicState out;
    out.t = t;
    out.position = h00 * a.position + (h10 * dt) * a.velocity + h01 * b.position +
                   (h11 * dt) * b.velocity;
    out.velocity = d00 * a.position + d10 * a.velocity + d01 * b.position + d11 * b.velocity;
    return out;
}

}  // namespace vtg
