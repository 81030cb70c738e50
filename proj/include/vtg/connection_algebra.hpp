/// @file connection_algebra.hpp
/// @brief Pointwise algebra of metric difference tensors on R^n.
///
/// A metric connection differs from the Levi-Civita connection by a tensor
/// A(X, Y, Z) = g(A(X, Y), Z) which is skew in its last two slots. In an
/// orthonormal basis this space has dimension n²(n-1)/2 and splits under
/// O(n) into a vectorial part (R^n), a totally skew part (3-forms) and a
/// traceless remainder. All tensors here are stored in an orthonormal basis.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vtg {

/// Dense (3,0) tensor on R^n, component (i, j, k) stored at (i*n + j)*n + k.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n) : n_(n), c_(n * n * n, 0.0) {}
    Tensor3(std::size_t n, std::vector<double> components);

    std::size_t dimension() const { return n_; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[index(i, j, k)]; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) { return c_[index(i, j, k)]; }
    std::span<const double> components() const { return c_; }

    Tensor3& operator+=(const Tensor3& o);
    Tensor3& operator-=(const Tensor3& o);
    friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
    friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
    friend Tensor3 operator*(double s, Tensor3 a);

    /// Frobenius inner product Σ a_ijk b_ijk.
    double dot(const Tensor3& o) const;
    double frobenius_norm() const;
    /// max |a_ijk - b_ijk|
    double max_abs_difference(const Tensor3& o) const;

private:
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n_ + j) * n_ + k; }

    std::size_t n_{0};
    std::vector<double> c_;
};

/// A tensor in the metric class A(X, V, W) + A(X, W, V) = 0.
///
/// Construction from raw components rejects inputs further than `tolerance`
/// from the class and then projects onto it, so the skew property holds exactly.
class DifferenceTensor {
public:
    explicit DifferenceTensor(std::size_t n) : t_(n) {}
    static DifferenceTensor from_components(std::size_t n, std::vector<double> components,
                                            double tolerance = 1e-12);
    static DifferenceTensor from_tensor(const Tensor3& t, double tolerance = 1e-12);

    std::size_t dimension() const { return t_.dimension(); }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return t_(i, j, k); }
    /// Sets A(i, j, k) = value and A(i, k, j) = -value.
    void set(std::size_t i, std::size_t j, std::size_t k, double value);
    const Tensor3& tensor() const { return t_; }

private:
    Tensor3 t_;
};

/// n²(n-1)/2
std::size_t metric_class_dimension(std::size_t n);
/// n(n-1)(n-2)/6
std::size_t three_form_dimension(std::size_t n);
/// Dimension of the traceless, non-skew remainder.
std::size_t remainder_dimension(std::size_t n);

/// A(X, Y, Z) = g(X, Y) g(V, Z) - g(V, Y) g(X, Z) with V in orthonormal components.
DifferenceTensor vectorial_tensor(std::span<const double> v);

/// Same as above for V given in coordinates of a basis with Gram matrix
/// `metric` (row-major n x n). The result is expressed in the orthonormal
/// basis obtained from the Cholesky factor of the metric. Non-SPD metric
/// throws DegeneracyError.
DifferenceTensor vectorial_tensor(std::span<const double> v, std::span<const double> metric);

/// T(X, Y, Z) = A(X, Y, Z) - A(Y, X, Z).
Tensor3 torsion_from(const DifferenceTensor& a);

/// Component list of a 3-form, indexed by i < j < k in lexicographic order.
using ThreeForm = std::vector<double>;

/// The totally skew tensor with the given 3-form components.
Tensor3 three_form_tensor(std::size_t n, const ThreeForm& form);

/// Vectorial part as a tensor.
Tensor3 vectorial_part_tensor(std::span<const double> v);

struct Decomposition {
    std::vector<double> vectorial;  ///< V with A_vec = vectorial_tensor(V)
    ThreeForm skew;                 ///< components of the totally skew part
    Tensor3 remainder;              ///< A' = A - A_vec - A_skew

    Tensor3 vectorial_tensor() const { return vectorial_part_tensor(vectorial); }
    Tensor3 skew_tensor() const { return three_form_tensor(remainder.dimension(), skew); }
};

/// Splits A into its vectorial, totally skew and remainder parts.
/// n < 2 throws ArgumentError.
Decomposition decompose(const DifferenceTensor& a);

}  // namespace vtg
