#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "warpcheck/errors.hpp"

namespace warpcheck {

/// First-order multivariate dual number: value plus a vector of partial
/// derivatives. Used to push point-derivatives through the Christoffel
/// assembly (including the metric inverse) without finite differences.
struct Dual {
    double v = 0.0;
    std::vector<double> d;

    Dual() = default;
    Dual(double value, std::size_t n) : v(value), d(n, 0.0) {}
    Dual(double value, std::vector<double> partials) : v(value), d(std::move(partials)) {}
};

inline Dual operator+(const Dual& a, const Dual& b) {
    Dual c = a;
    c.v += b.v;
    for (std::size_t i = 0; i < c.d.size(); ++i) c.d[i] += b.d[i];
    return c;
}
inline Dual operator-(const Dual& a, const Dual& b) {
    Dual c = a;
    c.v -= b.v;
    for (std::size_t i = 0; i < c.d.size(); ++i) c.d[i] -= b.d[i];
    return c;
}
inline Dual operator-(const Dual& a) {
    Dual c = a;
    c.v = -c.v;
    for (auto& x : c.d) x = -x;
    return c;
}
inline Dual operator*(const Dual& a, const Dual& b) {
    Dual c(a.v * b.v, a.d.size());
    for (std::size_t i = 0; i < c.d.size(); ++i) c.d[i] = a.v * b.d[i] + b.v * a.d[i];
    return c;
}
inline Dual operator/(const Dual& a, const Dual& b) {
    Dual c(a.v / b.v, a.d.size());
    for (std::size_t i = 0; i < c.d.size(); ++i) c.d[i] = (a.d[i] - c.v * b.d[i]) / b.v;
    return c;
}
inline Dual operator*(double s, const Dual& a) {
    Dual c = a;
    c.v *= s;
    for (auto& x : c.d) x *= s;
    return c;
}
inline Dual operator*(const Dual& a, double s) { return s * a; }

inline double leading_value(double x) { return x; }
inline double leading_value(const Dual& x) { return x.v; }

inline double zero_like(double) { return 0.0; }
inline double one_like(double) { return 1.0; }
inline Dual zero_like(const Dual& proto) { return Dual(0.0, proto.d.size()); }
inline Dual one_like(const Dual& proto) { return Dual(1.0, proto.d.size()); }

/// Dense square matrix over double or Dual; dimensions here never exceed the
/// chart dimension (<= 8), so storage and solvers stay simple.
template <class T>
class SquareMatrix {
  public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, const T& fill = T{}) : n_(n), a_(n * n, fill) {}

    std::size_t dim() const { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<T>& data() const { return a_; }

  private:
    std::size_t n_ = 0;
    std::vector<T> a_;
};

using Matrix = SquareMatrix<double>;

/// Determinant by LU elimination with partial pivoting on the leading value.
template <class T>
T determinant(SquareMatrix<T> m) {
    const std::size_t n = m.dim();
    if (n == 0) throw GeometryError("determinant of empty matrix");
    T det = one_like(m(0, 0));
    double sign = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(leading_value(m(r, col))) > std::fabs(leading_value(m(piv, col))))
                piv = r;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
            sign = -sign;
        }
        if (leading_value(m(col, col)) == 0.0) return zero_like(m(0, 0));
        det = det * m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            T factor = m(r, col) / m(col, col);
            for (std::size_t j = col; j < n; ++j) m(r, j) = m(r, j) - factor * m(col, j);
        }
    }
    return sign * det;
}

/// Gauss-Jordan inverse with partial pivoting. Throws GeometryError when the
/// determinant magnitude falls below `singular_tol` (degenerate metric).
template <class T>
SquareMatrix<T> inverse(SquareMatrix<T> m, double singular_tol = 1e-12) {
    const std::size_t n = m.dim();
    if (n == 0) throw GeometryError("inverse of empty matrix");
    const T proto = m(0, 0);
    SquareMatrix<T> inv(n, zero_like(proto));
    for (std::size_t i = 0; i < n; ++i) inv(i, i) = one_like(proto);
    double det_mag = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(leading_value(m(r, col))) > std::fabs(leading_value(m(piv, col))))
                piv = r;
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(col, j), m(piv, j));
                std::swap(inv(col, j), inv(piv, j));
            }
        det_mag *= std::fabs(leading_value(m(col, col)));
        if (std::fabs(leading_value(m(col, col))) == 0.0)
            throw GeometryError("singular matrix in inverse()");
        T pivot = m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) = m(col, j) / pivot;
            inv(col, j) = inv(col, j) / pivot;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            T factor = m(r, col);
            if (leading_value(factor) == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) = m(r, j) - factor * m(col, j);
                inv(r, j) = inv(r, j) - factor * inv(col, j);
            }
        }
    }
    if (det_mag < singular_tol) throw GeometryError("metric is numerically degenerate");
    return inv;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
std::vector<double> sym_eigenvalues(Matrix m);

/// Rank-3 array of doubles, cubic in one dimension.
struct Tensor3 {
    std::size_t n = 0;
    std::vector<double> a;

    Tensor3() = default;
    explicit Tensor3(std::size_t dim) : n(dim), a(dim * dim * dim, 0.0) {}
    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return a[(i * n + j) * n + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return a[(i * n + j) * n + k];
    }
};

/// Rank-4 array of doubles.
struct Tensor4 {
    std::size_t n = 0;
    std::vector<double> a;

    Tensor4() = default;
    explicit Tensor4(std::size_t dim) : n(dim), a(dim * dim * dim * dim, 0.0) {}
    double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return a[((i * n + j) * n + k) * n + l];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return a[((i * n + j) * n + k) * n + l];
    }
};

} // namespace warpcheck
