#include <doctest.h>

#include <cmath>
#include <random>

#include "vtg/errors.hpp"
#include "vtg/plane.hpp"

using namespace vtg;

namespace {

IntegratorSettings rk4(double step, double t1) {
    IntegratorSettings s;
    s.step = step;
    s.t1 = t1;
    return s;
}

GeodesicState unit_launch(Vec2 p, Vec2 v) { return {0.0, p, (1.0 / euclid(v)) * v}; }

}  // namespace

TEST_CASE("signed curvature κ = f ẏ - g ẋ") {
    const PlaneField w = winding_field(), s = shear_field();
    CHECK(plane_curvature(s, {0, {0, 2}, {0, 1}}) == 2.0);
    CHECK(plane_curvature(s, {0, {0, 2}, {1, 0}}) == 0.0);
    CHECK(plane_curvature(w, {0, {1, 0}, {1, 0}}) == -1.0);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-3, 3), a(0, 2 * M_PI);
    for (int n = 0; n < 100; ++n) {
        const double th = a(rng);
        const GeodesicState st{0, {u(rng), u(rng)}, {std::cos(th), std::sin(th)}};
        CHECK(plane_curvature(w, st) == doctest::Approx(-(st.position.u * st.velocity.u + st.position.v * st.velocity.v)));
        CHECK(w.curvature_density(st.position.u, st.position.v) == doctest::Approx(0.0).scale(1.0));
        CHECK(s.curvature_density(st.position.u, st.position.v) == doctest::Approx(0.0).scale(1.0));
    }
    PlaneField radial{"radial", [](double x, double) { return x; }, [](double, double y) { return y; }};
    CHECK(radial.curvature_density(0.3, 0.4) == doctest::Approx(-2.0));
}

TEST_CASE("d/dt p(γ) = κ for a flat field") {
    const PlaneField w = winding_field();
    const Trace tr = integrate(euclidean_plane(), w.to_vector_field(), unit_launch({0.5, 1}, {1, 1}), rk4(1e-3, 3.0));
    std::vector<double> t, p, k;
    for (const auto& st : tr.states) {
        t.push_back(st.t);
        p.push_back((*w.potential)(st.position));
        k.push_back(plane_curvature(w, st));
    }
    const auto dp = time_derivative(t, p);
    for (std::size_t i = 0; i < t.size(); i += 25) CHECK(dp[i] == doctest::Approx(k[i]).epsilon(1e-7).scale(1.0));
}

TEST_CASE("flat invariant ż e^{-ip}") {
    const PlaneField s = shear_field();
    const Trace tr = integrate(euclidean_plane(), s.to_vector_field(), unit_launch({1, 1}, {1, 1}), rk4(1e-3, 5.0));
    const FlatInvariantReport r = flat_invariant(tr, s);
    CHECK(r.pass);
    CHECK(r.max_deviation < 1e-9);
    CHECK(std::abs(r.z0) == doctest::Approx(1.0));
    PlaneField nop = shear_field();
    nop.potential.reset();
    CHECK_THROWS_AS(flat_invariant(tr, nop), ArgumentError);
    CHECK_THROWS_AS(flat_invariant(tr, winding_field()), ArgumentError);
}

TEST_CASE("arcsin invariant and branch switches") {
    const Trace tr = integrate_both_ways(euclidean_plane(), shear_field().to_vector_field(), unit_launch({1, 1}, {1, 1}),
                                         rk4(1e-3, 0.0), -20.0, 20.0);
    const ArcsinReport r = arcsin_invariant(tr);
    CHECK(r.pass);
    REQUIRE(r.segments.size() >= 2);
    CHECK(r.switch_times.size() == r.segments.size() - 1);
    for (std::size_t i = 0; i + 1 < r.segments.size(); ++i) {
        CHECK(r.segments[i].sign == -r.segments[i + 1].sign);
        // c' = -c - π across a switch
        CHECK(r.segments[i + 1].mean == doctest::Approx(-r.segments[i].mean - M_PI).epsilon(1e-8));
    }
    Trace bad;
    bad.states.push_back({0, {0, 0}, {0.1, 1.2}});
    bad.states.push_back({1, {0, 0}, {0.1, 1.2}});
    CHECK_THROWS_AS(arcsin_invariant(bad), NumericalDomainError);
}

TEST_CASE("strip bounds") {
    const double c = arcsin_constant(1.0, std::sqrt(0.5), std::sqrt(0.5));
    CHECK(c == doctest::Approx(0.5 - M_PI / 4));
    const StripBounds a = strip_bounds(1.0, std::sqrt(0.5), std::sqrt(0.5));
    CHECK(a.upper == doctest::Approx(std::sqrt(2 * (c + M_PI))).epsilon(1e-12));
    CHECK(a.lower == doctest::Approx(-a.upper));
    const StripBounds b = strip_bounds(1.0, 0.5 / std::sqrt(1.25), -1.0 / std::sqrt(1.25));
    CHECK(b.branch == -1);
    CHECK(b.c == doctest::Approx(-0.96365).epsilon(1e-5));
    CHECK(b.upper == doctest::Approx(1.3883).epsilon(1e-4));
    CHECK(b.lower == doctest::Approx(-1.3883).epsilon(1e-4));
    const StripBounds h = strip_bounds(1.5, 0.0, 1.0);
    CHECK(h.degenerate);
    CHECK(h.lower == 1.5);
    CHECK(h.upper == 1.5);
    // launched from the origin the band never exceeds √(2π)
    for (int k = 1; k < 36; ++k) {
        const double th = 2 * M_PI * k / 36;
        if (std::abs(std::sin(th)) < 1e-12) continue;
        const StripBounds sb = strip_bounds(0.0, std::sin(th), std::cos(th));
        CHECK(sb.upper <= std::sqrt(2 * M_PI) + 1e-12);
        CHECK(sb.lower >= -std::sqrt(2 * M_PI) - 1e-12);
    }
}

TEST_CASE("strip quadrature reproduces the travel time") {
    const double c = 0.5 - M_PI / 4;
    const Trace tr = integrate(euclidean_plane(), shear_field().to_vector_field(), unit_launch({1, 1}, {1, 1}), rk4(1e-3, 1.5));
    for (double y : {1.2, 1.6, 2.0}) {
        const StripQuadrature q = strip_quadrature(1.0, y, c, 1);
        CHECK_FALSE(q.divergent);
        CHECK(q.t == doctest::Approx(time_at_height(tr, y)).epsilon(1e-8));
    }
    CHECK(strip_quadrature(1.0, 1.0, c, 1).t == 0.0);
    const double y2 = std::sqrt(2 * (c + M_PI));
    const StripQuadrature at = strip_quadrature(1.0, y2, c, 1);
    CHECK(at.divergent);
    CHECK(at.t == kDivergentTime);
    CHECK_THROWS_AS(strip_quadrature(1.0, 3.0, c, 1), ArgumentError);
    CHECK_THROWS_AS(strip_quadrature(1.0, 2.0, c, 0), ArgumentError);
    CHECK_THROWS_AS(time_at_height(tr, 5.0), ArgumentError);
}

TEST_CASE("geodesics from the origin stay in the band |y| < √(2π)") {
    const ShootingSweep sw = shooting_sweep({0, 0}, {0, 3}, 24, 10.0, 1e-2);
    CHECK(sw.launches == 24);
    CHECK_FALSE(sw.target_reached);
    CHECK(sw.max_abs_y < std::sqrt(2 * M_PI));
    CHECK(sw.max_strip_excess < 1e-3);
    CHECK(sw.min_distance_to_target > 0.4);
}

TEST_CASE("half-plane charts and fields") {
    const ChartGeometry hp = upper_half_plane();
    CHECK_FALSE(hp.inside({0, 0}));
    CHECK(hp.inside({0, 1e-9}));
    const VectorFieldSpec f = half_plane_sigma_field();
    CHECK(f(Vec2{2.0, 4.0}).v == doctest::Approx(0.25));
    CHECK(gradient_relation_residual(hp, f, {0.3, 0.7}) < 1e-8);
    CHECK(zero_plane_field().f(1.0, 2.0) == 0.0);
}
