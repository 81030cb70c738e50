/// @file connection_algebra.cpp
#include "vtg/connection_algebra.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "vtg/errors.hpp"

namespace vtg {

Tensor3::Tensor3(std::size_t n, std::vector<double> components) : n_(n), c_(std::move(components)) {
    if (c_.size() != n * n * n)
        throw ArgumentError("tensor of dimension " + std::to_string(n) + " needs " +
                            std::to_string(n * n * n) + " components, got " +
                            std::to_string(c_.size()));
}

Tensor3& Tensor3::operator+=(const Tensor3& o) {
    if (o.n_ != n_) throw ArgumentError("tensor dimension mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
    if (o.n_ != n_) throw ArgumentError("tensor dimension mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Tensor3 operator*(double s, Tensor3 a) {
    for (auto& x : a.c_) x *= s;
    return a;
}

double Tensor3::dot(const Tensor3& o) const {
    if (o.n_ != n_) throw ArgumentError("tensor dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) s += c_[i] * o.c_[i];
    return s;
}

double Tensor3::frobenius_norm() const { return std::sqrt(dot(*this)); }

double Tensor3::max_abs_difference(const Tensor3& o) const {
    if (o.n_ != n_) throw ArgumentError("tensor dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) m = std::max(m, std::abs(c_[i] - o.c_[i]));
    return m;
}

DifferenceTensor DifferenceTensor::from_components(std::size_t n, std::vector<double> components,
                                                   double tolerance) {
    return from_tensor(Tensor3(n, std::move(components)), tolerance);
}

DifferenceTensor DifferenceTensor::from_tensor(const Tensor3& t, double tolerance) {
    const std::size_t n = t.dimension();
    DifferenceTensor a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                const double defect = t(i, j, k) + t(i, k, j);
                if (std::abs(defect) > tolerance)
                    throw ArgumentError("tensor is not skew in its last two slots at (" +
                                        std::to_string(i) + "," + std::to_string(j) + "," +
                                        std::to_string(k) + "), defect " + std::to_string(defect));
                a.set(i, j, k, 0.5 * (t(i, j, k) - t(i, k, j)));
            }
    return a;
}

void DifferenceTensor::set(std::size_t i, std::size_t j, std::size_t k, double value) {
    if (j == k) {
        t_(i, j, k) = 0.0;
        return;
    }
    t_(i, j, k) = value;
    t_(i, k, j) = -value;
}

std::size_t metric_class_dimension(std::size_t n) { return n * n * (n - 1) / 2; }

std::size_t three_form_dimension(std::size_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

std::size_t remainder_dimension(std::size_t n) {
    return metric_class_dimension(n) - n - three_form_dimension(n);
}

Tensor3 vectorial_part_tensor(std::span<const double> v) {
    const std::size_t n = v.size();
    Tensor3 t(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                t(i, j, k) = (i == j ? v[k] : 0.0) - (i == k ? v[j] : 0.0);
    return t;
}

DifferenceTensor vectorial_tensor(std::span<const double> v) {
    return DifferenceTensor::from_tensor(vectorial_part_tensor(v));
}

DifferenceTensor vectorial_tensor(std::span<const double> v, std::span<const double> metric) {
    const auto n = static_cast<Eigen::Index>(v.size());
    if (metric.size() != v.size() * v.size())
        throw ArgumentError("metric must be an n x n matrix matching the vector dimension");
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> g(
        metric.data(), n, n);
    if (!g.isApprox(g.transpose(), 1e-12)) throw DegeneracyError("metric is not symmetric");
    const Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw DegeneracyError("metric is not positive definite");
    // g = L Lᵀ, so the coframe θ = Lᵀ dx is orthonormal and V has components Lᵀ V.
    const Eigen::Map<const Eigen::VectorXd> vc(v.data(), n);
    const Eigen::VectorXd vo = llt.matrixU() * vc;
    return vectorial_tensor(std::span<const double>(vo.data(), static_cast<std::size_t>(n)));
}

Tensor3 torsion_from(const DifferenceTensor& a) {
    const std::size_t n = a.dimension();
    Tensor3 t(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) t(i, j, k) = a(i, j, k) - a(j, i, k);
    return t;
}

Tensor3 three_form_tensor(std::size_t n, const ThreeForm& form) {
    if (form.size() != three_form_dimension(n))
        throw ArgumentError("3-form on R^" + std::to_string(n) + " needs " +
                            std::to_string(three_form_dimension(n)) + " components");
    Tensor3 t(n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const double w = form[idx++];
                t(i, j, k) = w;
                t(j, k, i) = w;
                t(k, i, j) = w;
                t(j, i, k) = -w;
                t(i, k, j) = -w;
                t(k, j, i) = -w;
            }
    return t;
}

Decomposition decompose(const DifferenceTensor& a) {
    const std::size_t n = a.dimension();
    if (n < 2) throw ArgumentError("decomposition needs n >= 2");

    Decomposition d;
    // Vectorial part from the trace Σ_i A(e_i, e_i, ·) = (n-1) V.
    d.vectorial.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a(i, i, k);
        d.vectorial[k] = s / static_cast<double>(n - 1);
    }

    // Totally skew part from full antisymmetrization.
    d.skew.reserve(three_form_dimension(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                d.skew.push_back((a(i, j, k) - a(i, k, j) + a(j, k, i) - a(j, i, k) + a(k, i, j) -
                                  a(k, j, i)) /
                                 6.0);

    d.remainder = a.tensor() - d.vectorial_tensor() - three_form_tensor(n, d.skew);
    return d;
}

}  // namespace vtg
