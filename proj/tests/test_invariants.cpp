#include <doctest.h>

#include <cmath>
#include <random>

#include "vtg/errors.hpp"
#include "vtg/invariants.hpp"
#include "vtg/plane.hpp"
#include "vtg/surfaces.hpp"

using namespace vtg;

namespace {

IntegratorSettings rk4(double step, double t1) {
    IntegratorSettings s;
    s.step = step;
    s.t1 = t1;
    return s;
}

}  // namespace

TEST_CASE("Lagrange identity: |V|² - g(V,γ̇)² = κ² for unit velocity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3), a(0, 2 * M_PI);
    const PlaneField pf = shear_field();
    const VectorFieldSpec field = pf.to_vector_field();
    Trace tr;
    tr.meta.field_id = field.id;
    for (int n = 0; n < 100; ++n) {
        const double th = a(rng);
        tr.states.push_back({static_cast<double>(n), {u(rng), u(rng)}, {std::cos(th), std::sin(th)}});
    }
    const auto k = curvature_general(tr, euclidean_plane(), field);
    for (int n = 0; n < 100; ++n) CHECK(k[n] == doctest::Approx(std::abs(plane_curvature(pf, tr.states[n]))).epsilon(1e-10).scale(1.0));
    tr.meta.field_id = "other";
    CHECK_THROWS_AS(curvature_general(tr, euclidean_plane(), field), ArgumentError);
}

TEST_CASE("sphere loxodrome curvature κ = |cot s| |sin ν|") {
    const CatalogSurface sphere = make_sphere();
    const double nu = 0.6;
    const Trace tr = integrate(sphere.chart, sphere.field, loxodrome_launch(sphere, 1.2, 0.0, nu), rk4(1e-3, 1.0));
    const auto k = curvature_general(tr, sphere.chart, sphere.field);
    const auto kk = kinematic_curvature(tr, sphere.chart);
    for (std::size_t i = 0; i < tr.size(); i += 50) {
        const double s = tr.states[i].position.u;
        const double expected = std::abs(std::cos(s) / std::sin(s)) * std::sin(nu);
        CHECK(k[i] == doctest::Approx(expected).epsilon(1e-8).scale(1.0));
        CHECK(kk[i] == doctest::Approx(expected).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("Killing field: g(V, γ̇) is non-increasing") {
    const ChartGeometry plane = euclidean_plane();
    const VectorFieldSpec winding = winding_field().to_vector_field();
    const Trace tr = integrate(plane, winding, {0.0, {0, 2}, {1, 0}}, rk4(1e-3, 5.0));
    const KillingCheck kc = killing_curvature_check(tr, plane, winding);
    CHECK(kc.pass);
    CHECK(kc.monotone);
    CHECK(kc.max_residual < 1e-4);
    CHECK(kc.g_v.front() > kc.g_v.back());
    const VectorFieldSpec shear = shear_field().to_vector_field();
    const Trace ts = integrate(plane, shear, {0.0, {0, 1}, {1, 0}}, rk4(1e-2, 1.0));
    CHECK_THROWS_AS(killing_curvature_check(ts, plane, shear), ArgumentError);
}

TEST_CASE("conformal constant on surfaces of revolution") {
    const auto dphi = [](Vec2) { return Vec2{0.0, 1.0}; };
    for (const auto& [surf, s0] : {std::pair{make_sphere(), 1.2}, std::pair{make_pseudosphere(), 2.0}}) {
        const Trace tr = integrate(surf.chart, surf.field, loxodrome_launch(surf, s0, 0.0, 0.9), rk4(1e-3, 1.0));
        const InvariantReport with = conformal_constant(tr, surf.chart, *surf.field.sigma, dphi);
        INFO(surf.name);
        CHECK(with.pass);
        CHECK(with.stddev < 1e-6);
        // without the conformal factor the quantity drifts
        const ScalarField zero{[](Vec2) { return 0.0; }};
        CHECK(conformal_constant(tr, surf.chart, zero, dphi).stddev > 1e-3);
    }
}

TEST_CASE("isometries commuting with V map geodesics to geodesics") {
    const ChartGeometry plane = euclidean_plane();
    const VectorFieldSpec winding = winding_field().to_vector_field();
    const VectorFieldSpec shear = shear_field().to_vector_field();
    const Trace tw = integrate(plane, winding, {0.0, {0.5, 1}, {0.6, 0.8}}, rk4(1e-3, 3.0));
    CHECK(killing_flow_symmetry(tw, plane, winding, rotation_about_origin(M_PI / 3)) < 1e-6);
    CHECK(killing_flow_symmetry(tw, plane, winding, identity_isometry()) < 1e-14);
    const Trace ts = integrate(plane, shear, {0.0, {1, 1}, {0.6, 0.8}}, rk4(1e-3, 3.0));
    CHECK(killing_flow_symmetry(ts, plane, shear, translation({2.0, 0.0})) < 1e-6);
    CHECK_THROWS_AS(killing_flow_symmetry(ts, plane, shear, translation({0.0, 1.0})), ArgumentError);
    CHECK_THROWS_AS(killing_flow_symmetry(ts, plane, shear, rotation_about_origin(0.5)), ArgumentError);
}

TEST_CASE("report statistics") {
    const InvariantReport r = make_report("x", {1.0, 1.5, 0.5, 1.0}, Gate::max_deviation, 0.6);
    CHECK(r.max_deviation == 0.5);
    CHECK(r.stddev == doctest::Approx(std::sqrt(0.125)));
    CHECK(r.pass);
    CHECK_FALSE(make_report("x", {1.0, 1.5, 0.5, 1.0}, Gate::max_deviation, 0.4).pass);
    CHECK(make_report("x", {1.0, 3.0}, Gate::max_deviation, 1.0, 2.0).max_deviation == 1.0);
}

TEST_CASE("five-point derivatives are exact for quartics on uneven grids") {
    std::vector<double> t{0.0, 0.1, 0.25, 0.3, 0.5, 0.55, 0.8, 1.0};
    std::vector<double> f;
    for (double x : t) f.push_back(x * x * x * x - 2 * x + 1);
    const auto d = time_derivative(t, f);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(d[i] == doctest::Approx(4 * std::pow(t[i], 3) - 2).epsilon(1e-10).scale(1.0));
    CHECK_THROWS_AS(time_derivative({0.0}, {1.0}), ArgumentError);
}
