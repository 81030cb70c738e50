#include <doctest.h>

#include <cmath>
#include <random>

#include "vtg/errors.hpp"
#include "vtg/integrator.hpp"
#include "vtg/plane.hpp"
#include "vtg/surfaces.hpp"

using namespace vtg;

namespace {

IntegratorSettings rk4(double step, double t1, double t0 = 0.0) {
    IntegratorSettings s;
    s.step = step;
    s.t0 = t0;
    s.t1 = t1;
    return s;
}

}  // namespace

TEST_CASE("straight line in the flat plane") {
    const Trace tr = integrate(euclidean_plane(), zero_field(), {0.0, {0, 0}, {1, 0}}, rk4(1e-2, 1.0));
    CHECK(tr.meta.stop == StopReason::reached_end);
    CHECK(tr.back().t == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tr.back().position.u == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(tr.back().position.v) < 1e-15);
    CHECK(tr.size() == 101);
    CHECK(tr.meta.energy == 1.0);
}

TEST_CASE("plane right-hand side is (-κ ẏ, κ ẋ)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3, 3), a(0, 2 * M_PI);
    const ChartGeometry plane = euclidean_plane();
    for (const PlaneField& pf : {winding_field(), shear_field()}) {
        const VectorFieldSpec field = pf.to_vector_field();
        for (int n = 0; n < 100; ++n) {
            const double th = a(rng);
            const GeodesicState st{0.0, {u(rng), u(rng)}, {std::cos(th), std::sin(th)}};
            const Vec2 acc = geodesic_rhs(plane, field, st, 1.0);
            const double k = plane_curvature(pf, st);
            CHECK(acc.u == doctest::Approx(-k * st.velocity.v).epsilon(1e-12).scale(1.0));
            CHECK(acc.v == doctest::Approx(k * st.velocity.u).epsilon(1e-12).scale(1.0));
            // acceleration is orthogonal to the velocity
            CHECK(std::abs(plane.inner(st.position, acc, st.velocity)) < 1e-12);
        }
    }
}

TEST_CASE("meridians are geodesics of the sphere") {
    const CatalogSurface sphere = make_sphere();
    for (double s : {0.3, 1.0, 2.0}) {
        const Vec2 acc = geodesic_rhs(sphere.chart, sphere.field, {0.0, {s, 0.4}, {1.0, 0.0}}, 1.0);
        CHECK(std::abs(acc.u) < 1e-12);
        CHECK(std::abs(acc.v) < 1e-12);
    }
    const Trace tr = integrate(sphere.chart, sphere.field, {0.0, {1.0, 0.4}, {1, 0}}, rk4(1e-3, 1.0));
    CHECK(tr.back().position.u == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(tr.back().position.v == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("RK4 self-convergence on the winding field") {
    const ChartGeometry plane = euclidean_plane();
    const VectorFieldSpec field = winding_field().to_vector_field();
    const GeodesicState launch{0.0, {0, 2}, {1, 0}};
    auto endpoint = [&](double h) { return integrate(plane, field, launch, rk4(h, 5.0)).back().position; };
    const double h = 0.02;
    const Vec2 ref = endpoint(h / 16);
    const double e1 = euclid(endpoint(h) - ref);
    const double e2 = euclid(endpoint(h / 2) - ref);
    const double e4 = euclid(endpoint(h / 4) - ref);
    CHECK(euclid(endpoint(h / 8) - ref) < 1e-6);
    CHECK(std::log2(e1 / e2) > 3.7);
    CHECK(std::log2(e2 / e4) > 3.7);
}

TEST_CASE("time reversal returns to the launch point") {
    const ChartGeometry plane = euclidean_plane();
    const VectorFieldSpec field = shear_field().to_vector_field();
    const GeodesicState launch{0.0, {1, 1}, {std::sqrt(0.5), std::sqrt(0.5)}};
    const Trace fwd = integrate(plane, field, launch, rk4(1e-3, 3.0));
    const GeodesicState back{0.0, fwd.back().position, -1.0 * fwd.back().velocity};
    const Trace rev = integrate(plane, field, back, rk4(1e-3, 3.0));
    CHECK(euclid(rev.back().position - launch.position) < 1e-9);

    // Backward integration visits the same points as the reversed launch.
    const Trace bwd = integrate(plane, field, launch, rk4(1e-3, -3.0));
    const Trace mirrored = integrate(plane, field, {0.0, launch.position, -1.0 * launch.velocity}, rk4(1e-3, 3.0));
    CHECK(bwd.front().t == doctest::Approx(-3.0));
    CHECK(bwd.end_state().t == doctest::Approx(-3.0));
    CHECK(euclid(bwd.front().position - mirrored.back().position) < 1e-9);
    for (std::size_t i = 1; i < bwd.size(); ++i) CHECK(bwd.states[i].t > bwd.states[i - 1].t);
    CHECK(bwd.meta.launch_index == bwd.size() - 1);
}

TEST_CASE("both-ways integration marks the launch sample") {
    const Trace tr = integrate_both_ways(euclidean_plane(), winding_field().to_vector_field(),
                                         {0.0, {0, 2}, {1, 0}}, rk4(1e-2, 0.0), -2.0, 3.0);
    CHECK(tr.front().t == doctest::Approx(-2.0));
    CHECK(tr.back().t == doctest::Approx(3.0));
    CHECK(tr.states[tr.meta.launch_index].t == 0.0);
    CHECK(tr.states[tr.meta.launch_index].position == Vec2{0, 2});
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.states[i].t > tr.states[i - 1].t);
    CHECK(tr.diagnostics.size() == tr.size());
    CHECK_THROWS_AS(integrate_both_ways(euclidean_plane(), zero_field(), {0.0, {0, 0}, {1, 0}}, rk4(1e-2, 0.0), 1.0, 2.0),
                    ArgumentError);
}

TEST_CASE("adaptive RK45 agrees with fixed-step RK4") {
    const ChartGeometry plane = euclidean_plane();
    const VectorFieldSpec field = winding_field().to_vector_field();
    IntegratorSettings s = rk4(1e-2, 5.0);
    s.method = Method::rk45;
    const Trace a = integrate(plane, field, {0.0, {0, 2}, {1, 0}}, s);
    const Trace b = integrate(plane, field, {0.0, {0, 2}, {1, 0}}, rk4(1e-3, 5.0));
    CHECK(a.back().t == doctest::Approx(5.0));
    CHECK(euclid(a.back().position - b.back().position) < 1e-7);
    CHECK(std::string(to_string(Method::rk45)) == "rk45");
}

TEST_CASE("leaving the domain stops at the boundary") {
    const Trace tr = integrate(upper_half_plane(), half_plane_sigma_field(), {0.0, {0, 1}, {1, 0}}, rk4(1e-3, 3.0));
    CHECK(tr.meta.stop == StopReason::boundary);
    CHECK(tr.back().t < 3.0);
    CHECK(tr.back().position.v > 0.0);
    CHECK(tr.back().position.v < 1e-2);
    CHECK(std::string(to_string(StopReason::boundary)) == "boundary");
}

TEST_CASE("step budget") {
    IntegratorSettings s = rk4(1e-2, 10.0);
    s.max_steps = 5;
    const Trace tr = integrate(euclidean_plane(), zero_field(), {0.0, {0, 0}, {1, 0}}, s);
    CHECK(tr.meta.stop == StopReason::max_steps);
    CHECK(tr.size() == 6);
}

TEST_CASE("invalid launches and settings") {
    const ChartGeometry plane = euclidean_plane();
    CHECK_THROWS_AS(integrate(plane, zero_field(), {0.0, {0, 0}, {0, 0}}, rk4(1e-2, 1.0)), ArgumentError);
    CHECK_THROWS_AS(integrate(upper_half_plane(), zero_field(), {0.0, {0, -1}, {1, 0}}, rk4(1e-2, 1.0)), DomainError);
    CHECK_THROWS_AS(integrate(plane, zero_field(), {0.0, {0, 0}, {1, 0}}, rk4(0.0, 1.0)), ArgumentError);
    IntegratorSettings s = rk4(1e-2, 1.0);
    s.method = Method::rk45;
    s.rtol = -1.0;
    CHECK_THROWS_AS(s.validate(), ArgumentError);
}

TEST_CASE("energy scaling and diagnostics") {
    const ChartGeometry plane = euclidean_plane();
    const PlaneField pf = shear_field();
    const VectorFieldSpec field = pf.to_vector_field();
    const Trace tr = integrate(plane, field, {0.0, {0, 1}, {0, 2}}, rk4(1e-3, 1.0));
    CHECK(tr.meta.energy == doctest::Approx(2.0));
    for (std::size_t i = 0; i < tr.size(); i += 100) {
        CHECK(tr.diagnostics[i].speed == doctest::Approx(2.0).epsilon(1e-9));
        const GeodesicState& st = tr.states[i];
        CHECK(tr.diagnostics[i].g_v == doctest::Approx(plane.inner(st.position, field(st.position), st.velocity)));
        const GeodesicState unit{st.t, st.position, 0.5 * st.velocity};
        CHECK(tr.diagnostics[i].kappa == doctest::Approx(std::abs(plane_curvature(pf, unit))).epsilon(1e-8));
    }
}

TEST_CASE("Hermite sampling") {
    const Trace tr = integrate(euclidean_plane(), winding_field().to_vector_field(), {0.0, {0, 2}, {1, 0}}, rk4(1e-2, 2.0));
    const Trace fine = integrate(euclidean_plane(), winding_field().to_vector_field(), {0.0, {0, 2}, {1, 0}}, rk4(1e-3, 2.0));
    const GeodesicState a = sample_at(tr, 1.2345);
    const GeodesicState b = sample_at(fine, 1.2345);
    CHECK(a.t == 1.2345);
    CHECK(euclid(a.position - b.position) < 1e-7);
    CHECK(euclid(a.velocity - b.velocity) < 1e-5);
    CHECK(sample_at(tr, -5.0).position == tr.front().position);
    CHECK(sample_at(tr, 1.0).position.u == doctest::Approx(tr.states[100].position.u));
}
