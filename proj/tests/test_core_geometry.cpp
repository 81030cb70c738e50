#include <doctest.h>

#include <cmath>
#include <random>

#include "vtg/core_geometry.hpp"
#include "vtg/errors.hpp"
#include "vtg/plane.hpp"
#include "vtg/surfaces.hpp"

using namespace vtg;

namespace {

// Γ^k_ij from central differences of g with a step independent of fd_step.
Christoffel oracle_christoffel(const ChartGeometry& chart, Vec2 p, double h = 1e-5) {
    Mat2 dg[2];
    for (int m = 0; m < 2; ++m) {
        Vec2 e{};
        e[m] = h;
        const Mat2 gp = chart.metric(p + e), gm = chart.metric(p - e);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) dg[m](i, j) = (gp(i, j) - gm(i, j)) / (2 * h);
    }
    const Mat2 gi = chart.inverse_metric(p);
    Christoffel out{};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l) s += 0.5 * gi(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
                out[k][i][j] = s;
            }
    return out;
}

double max_gamma_difference(const Christoffel& a, const Christoffel& b) {
    double d = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a[k][i][j] - b[k][i][j]));
    return d;
}

ChartGeometry sin_chart() {
    DomainBox box;
    box.u_min = 0.0;
    box.u_max = M_PI;
    return ChartGeometry("sin", {"s", "phi"}, box, [](Vec2 p) { return Mat2::diag(1.0, std::sin(p.u) * std::sin(p.u)); });
}

}  // namespace

TEST_CASE("flat plane has vanishing Christoffel symbols") {
    const ChartGeometry plane = euclidean_plane();
    for (Vec2 p : {Vec2{0, 0}, Vec2{3, -2}, Vec2{-7.5, 1e3}}) {
        CHECK(max_gamma_difference(plane.christoffel(p), Christoffel{}) == 0.0);
        CHECK(max_gamma_difference(plane.christoffel_fd(p), Christoffel{}) < 1e-12);
    }
}

TEST_CASE("sphere chart Christoffels: closed form and difference oracle") {
    const ChartGeometry chart = sin_chart();
    for (double s : {0.3, 1.0, 1.5, 2.7}) {
        const Christoffel g = chart.christoffel({s, 0.4});
        CHECK(g[0][1][1] == doctest::Approx(-std::sin(s) * std::cos(s)).epsilon(1e-8));
        CHECK(g[1][0][1] == doctest::Approx(std::cos(s) / std::sin(s)).epsilon(1e-8));
        CHECK(g[1][1][0] == doctest::Approx(std::cos(s) / std::sin(s)).epsilon(1e-8));
        CHECK(max_gamma_difference(g, oracle_christoffel(chart, {s, 0.4})) < 1e-6);
    }
}

TEST_CASE("Mercator-image metric diag(1/sin^2 s, 1) matches the difference oracle") {
    DomainBox box;
    box.u_min = 0.0;
    box.u_max = M_PI;
    const ChartGeometry chart("tilde", {"s", "phi"}, box,
                              [](Vec2 p) { return Mat2::diag(1.0 / (std::sin(p.u) * std::sin(p.u)), 1.0); });
    for (double s : {0.4, 1.2, 2.0}) {
        const Christoffel g = chart.christoffel({s, 0.0});
        CHECK(max_gamma_difference(g, oracle_christoffel(chart, {s, 0.0})) < 1e-6);
        CHECK(g[0][0][0] == doctest::Approx(-std::cos(s) / std::sin(s)).epsilon(1e-7));
    }
}

TEST_CASE("catalog charts: analytic and difference Christoffels agree on a 20x20 grid") {
    for (const auto& surf : {make_sphere(), make_pseudosphere(), make_catenoid()}) {
        ChartGeometry chart = surf.chart;
        const DomainBox& d = chart.domain();
        double worst = 0.0;
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j) {
                const Vec2 p{d.u_min + (d.u_max - d.u_min) * i / 21.0, -3.0 + 6.0 * j / 21.0};
                worst = std::max(worst, max_gamma_difference(chart.christoffel(p), chart.christoffel_fd(p)));
                // symmetry in the lower indices
                const Christoffel g = chart.christoffel(p);
                CHECK(g[0][0][1] == g[0][1][0]);
                CHECK(g[1][0][1] == g[1][1][0]);
            }
        INFO(surf.name);
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("metric compatibility of the Christoffel symbols") {
    const ChartGeometry chart = sin_chart();
    const Vec2 p{0.9, 0.0};
    const double h = 1e-6;
    const Christoffel G = chart.christoffel(p);
    const Mat2 g = chart.metric(p);
    for (int k = 0; k < 2; ++k) {
        Vec2 e{};
        e[k] = h;
        const Mat2 gp = chart.metric(p + e), gm = chart.metric(p - e);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double lowered = 0.0;  // Γ_ikj + Γ_jki with Γ_abc = g_al Γ^l_bc
                for (int l = 0; l < 2; ++l) lowered += g(i, l) * G[l][k][j] + g(j, l) * G[l][k][i];
                CHECK((gp(i, j) - gm(i, j)) / (2 * h) == doctest::Approx(lowered).epsilon(1e-6));
            }
    }
}

TEST_CASE("domain and degeneracy errors") {
    const ChartGeometry chart = sin_chart();
    CHECK_THROWS_AS(chart.metric({0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(chart.metric({-1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(chart.christoffel({M_PI, 0.0}), DomainError);
    const ChartGeometry bad("bad", {"u", "v"}, DomainBox{}, [](Vec2 p) { return Mat2::diag(1.0, p.v); });
    CHECK_THROWS_AS(bad.metric({0.0, -1.0}), DegeneracyError);
    CHECK_NOTHROW(bad.metric({0.0, 1.0}));
    ChartGeometry no_analytic = sin_chart();
    CHECK_THROWS_AS(no_analytic.set_mode(DerivativeMode::analytic), ArgumentError);
}

TEST_CASE("grad obeys g(grad f, X) = df(X)") {
    const ChartGeometry chart = sin_chart();
    const ScalarField f{[](Vec2 p) { return std::cos(p.u) * std::sin(2 * p.v) + p.u * p.u; }};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> s(0.2, 2.9), phi(-3, 3), c(-1, 1);
    for (int n = 0; n < 100; ++n) {
        const Vec2 p{s(rng), phi(rng)};
        const Vec2 x{c(rng), c(rng)};
        const double h = 1e-6;
        const double df = (f(p + h * x) - f(p - h * x)) / (2 * h);
        CHECK(chart.inner(p, chart.grad(f, p), x) == doctest::Approx(df).epsilon(1e-8).scale(1.0));
    }
    CHECK(euclid(chart.grad(ScalarField{[](Vec2) { return 3.0; }}, {1.0, 0.0})) == 0.0);
    const ChartGeometry plane = euclidean_plane();
    const Vec2 g = plane.grad(ScalarField{[](Vec2 p) { return -(p.u * p.u + p.v * p.v) / 2; }}, {1.5, -2.0});
    CHECK(g.u == doctest::Approx(-1.5).epsilon(1e-8));
    CHECK(g.v == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("surface gradient: V = -grad(-ln r) = (r'/r) e1") {
    for (const auto& surf : {make_sphere(), make_pseudosphere(), make_catenoid()}) {
        const DomainBox& d = surf.chart.domain();
        for (int i = 1; i < 10; ++i) {
            const Vec2 p{d.u_min + (d.u_max - d.u_min) * i / 10.0, 0.3};
            CHECK(gradient_relation_residual(surf.chart, surf.field, p) < 1e-8);
            const ScalarField numeric{[&](Vec2 q) { return (*surf.field.sigma)(q); }};
            const Vec2 g = surf.chart.grad(numeric, p);
            const ProfileJet j = surf.profile.jet(p.u);
            CHECK(g.u == doctest::Approx(-j.dr / j.r).epsilon(1e-7).scale(1.0));
            CHECK(std::abs(g.v) < 1e-9);
        }
    }
}

TEST_CASE("inner products and frames") {
    const ChartGeometry plane = euclidean_plane();
    CHECK(plane.inner({0, 0}, {1, 2}, {3, -4}) == -5.0);
    CHECK(plane.norm({0, 0}, {3, 4}) == 5.0);
    // g = diag(1, r^2) at r = 2
    const CatalogSurface sphere = make_sphere();
    const double s = std::asin(0.5);  // r = 1/2
    CHECK(sphere.chart.inner({s, 0}, {0, 1}, {0, 1}) == doctest::Approx(0.25));
    for (const auto& surf : {make_sphere(), make_pseudosphere(), make_catenoid()}) {
        const DomainBox& d = surf.chart.domain();
        for (int i = 1; i < 10; ++i) {
            const Vec2 p{d.u_min + (d.u_max - d.u_min) * i / 10.0, 1.0};
            CHECK(orthonormality_defect(surf.chart, surf.frame, p) < 1e-10);
            const ProfileJet j = surf.profile.jet(p.u);
            CHECK(surf.chart.norm(p, surf.field(p)) == doctest::Approx(std::abs(j.dr / j.r)).epsilon(1e-12));
        }
    }
}

TEST_CASE("plane potentials and Killing fields") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    const ChartGeometry plane = euclidean_plane();
    const VectorFieldSpec winding = winding_field().to_vector_field();
    const VectorFieldSpec shear = shear_field().to_vector_field();
    for (int n = 0; n < 50; ++n) {
        const Vec2 p{u(rng), u(rng)};
        CHECK(plane_potential_residual(winding, p) < 1e-8);
        CHECK(plane_potential_residual(shear, p) < 1e-8);
        const Vec2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
        CHECK(std::abs(killing_residual(plane, winding, p, x, y)) < 1e-6);
        CHECK(std::abs(killing_residual(plane, zero_field(), p, x, y)) < 1e-12);
    }
    // The shear field is not Killing: g(∇_X V, X) = x_u x_v for V = y∂x.
    CHECK(std::abs(killing_residual(plane, shear, {0, 0}, {1, 1}, {1, 1})) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(gradient_relation_residual(plane, shear, {0, 0}), ArgumentError);
    CHECK_THROWS_AS(plane_potential_residual(half_plane_sigma_field(), {0, 1}), ArgumentError);
}
