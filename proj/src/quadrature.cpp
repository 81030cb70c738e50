/// @file quadrature.cpp
#include "vtg/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace vtg {

QuadratureValue integrate_gk(const std::function<double(double)>& f, double a, double b,
                             double tol) {
    if (a == b) return {};
    // Boost's panel error estimate carries an absolute roundoff floor, so
    // integrate over [0, 1] where it is relative to the integral's size.
    const double w = b - a;
    auto g = [&f, a, w](double x) { return f(a + w * x) * w; };
    QuadratureValue q;
    q.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, 15, tol,
                                                                            &q.error);
    return q;
}

double integrate_gauss15(const std::function<double(double)>& f, double a, double b) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
}

}  // namespace vtg
