/// @file core_geometry.cpp
#include "vtg/core_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "vtg/errors.hpp"

namespace vtg {

namespace {

std::string describe(Vec2 p) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << p.u << ", " << p.v << ")";
    return os.str();
}

Vec2 axis(int i) { return i == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0}; }

}  // namespace

double fd_step(double coordinate) { return 1e-6 * std::max(1.0, std::abs(coordinate)); }

Vec2 differential(const ScalarField& f, Vec2 p) {
    if (f.differential) return f.differential(p);
    Vec2 d;
    for (int i = 0; i < 2; ++i) {
        const double h = fd_step(p[i]);
        const Vec2 e = axis(i);
        d[i] = (f.value(p + h * e) - f.value(p - h * e)) / (2.0 * h);
    }
    return d;
}

ChartGeometry::ChartGeometry(std::string id, std::array<std::string, 2> coordinate_names,
                             DomainBox domain, MetricFn metric, ChristoffelFn christoffel)
    : id_(std::move(id)),
      names_(std::move(coordinate_names)),
      domain_(domain),
      metric_(std::move(metric)),
      christoffel_(std::move(christoffel)),
      mode_(christoffel_ ? DerivativeMode::analytic : DerivativeMode::finite_difference) {}

void ChartGeometry::set_mode(DerivativeMode mode) {
    if (mode == DerivativeMode::analytic && !christoffel_)
        throw ArgumentError("chart '" + id_ + "' has no analytic Christoffel evaluator");
    mode_ = mode;
}

void ChartGeometry::require_inside(Vec2 p) const {
    if (!domain_.contains(p))
        throw DomainError("point " + describe(p) + " is outside the domain of chart '" + id_ + "'");
}

Mat2 ChartGeometry::metric(Vec2 p) const {
    require_inside(p);
    const Mat2 g = metric_(p);
    if (!(g(0, 0) > 0.0) || !(g.det() > 0.0) || !std::isfinite(g.det()))
        throw DegeneracyError("metric of chart '" + id_ + "' is not positive definite at " +
                              describe(p));
    return g;
}

Mat2 ChartGeometry::inverse_metric(Vec2 p) const {
    const Mat2 g = metric(p);
    const double d = g.det();
    Mat2 inv;
    inv(0, 0) = g(1, 1) / d;
    inv(1, 1) = g(0, 0) / d;
    inv(0, 1) = -g(0, 1) / d;
    inv(1, 0) = -g(1, 0) / d;
    return inv;
}

Christoffel ChartGeometry::christoffel(Vec2 p) const {
    if (mode_ == DerivativeMode::analytic) {
        require_inside(p);
        return christoffel_(p);
    }
    return christoffel_fd(p);
}

Christoffel ChartGeometry::christoffel_fd(Vec2 p) const {
    const Mat2 ginv = inverse_metric(p);
    // dg[l](i, j) = ∂_l g_ij
    std::array<Mat2, 2> dg;
    for (int l = 0; l < 2; ++l) {
        const double h = fd_step(p[l]);
        const Vec2 e = axis(l);
        const Mat2 plus = metric(p + h * e);
        const Mat2 minus = metric(p - h * e);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) dg[l](i, j) = (plus(i, j) - minus(i, j)) / (2.0 * h);
    }
    Christoffel gamma{};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l)
                    s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma[k][i][j] = 0.5 * s;
            }
    return gamma;
}

double ChartGeometry::inner(Vec2 p, Vec2 x, Vec2 y) const {
    const Mat2 g = metric(p);
    const Vec2 gy = g * y;
    return x.u * gy.u + x.v * gy.v;
}

double ChartGeometry::norm(Vec2 p, Vec2 x) const { return std::sqrt(inner(p, x, x)); }

Vec2 ChartGeometry::grad(const ScalarField& f, Vec2 p) const {
    const Mat2 ginv = inverse_metric(p);
    return ginv * differential(f, p);
}

Vec2 ChartGeometry::covariant_derivative(const std::function<Vec2(Vec2)>& y, Vec2 p,
                                         Vec2 x) const {
    require_inside(p);
    Vec2 directional;
    for (int i = 0; i < 2; ++i) {
        const double h = fd_step(p[i]);
        const Vec2 e = axis(i);
        const Vec2 dyi = (1.0 / (2.0 * h)) * (y(p + h * e) - y(p - h * e));
        directional += x[i] * dyi;
    }
    return directional + contract(christoffel(p), x, y(p));
}

Vec2 contract(const Christoffel& gamma, Vec2 x, Vec2 y) {
    Vec2 out;
    for (int k = 0; k < 2; ++k) {
        double s = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s += gamma[k][i][j] * x[i] * y[j];
        out[k] = s;
    }
    return out;
}

double orthonormality_defect(const ChartGeometry& chart, const OrthoFrame& frame, Vec2 p) {
    const Vec2 e1 = frame.e1(p);
    const Vec2 e2 = frame.e2(p);
    return std::max({std::abs(chart.inner(p, e1, e1) - 1.0), std::abs(chart.inner(p, e2, e2) - 1.0),
                     std::abs(chart.inner(p, e1, e2))});
}

VectorFieldSpec zero_field() {
    VectorFieldSpec v;
    v.id = "zero";
    v.components = [](Vec2) { return Vec2{}; };
    v.sigma = ScalarField{[](Vec2) { return 0.0; }, [](Vec2) { return Vec2{}; }};
    v.killing = true;
    return v;
}

double gradient_relation_residual(const ChartGeometry& chart, const VectorFieldSpec& field, Vec2 p) {
    if (!field.sigma) throw ArgumentError("field '" + field.id + "' declares no potential sigma");
    const Vec2 r = field(p) + chart.grad(*field.sigma, p);
    return chart.norm(p, r);
}

double plane_potential_residual(const VectorFieldSpec& field, Vec2 p) {
    if (!field.plane_potential)
        throw ArgumentError("field '" + field.id + "' declares no plane potential p");
    const Vec2 dp = differential(*field.plane_potential, p);
    const Vec2 v = field(p);
    return std::max(std::abs(v.u - dp.v), std::abs(v.v + dp.u));
}

double killing_residual(const ChartGeometry& chart, const VectorFieldSpec& field, Vec2 p, Vec2 x,
                        Vec2 y) {
    const Vec2 dxv = chart.covariant_derivative(field.components, p, x);
    const Vec2 dyv = chart.covariant_derivative(field.components, p, y);
    return chart.inner(p, dxv, y) + chart.inner(p, dyv, x);
}

}  // namespace vtg
