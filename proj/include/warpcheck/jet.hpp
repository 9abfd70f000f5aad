#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace warpcheck {

/// Second-order forward-mode jet: value, gradient, and Hessian with respect
/// to a fixed set of n independent variables. The Hessian is stored as a
/// packed lower triangle, so hess(i,j) and hess(j,i) alias the same element
/// and symmetry of mixed partials is structural (bitwise).
class Jet2 {
  public:
    Jet2() = default;

    static Jet2 constant(double v, std::size_t n) {
        Jet2 j;
        j.value_ = v;
        j.grad_.assign(n, 0.0);
        j.hess_.assign(n * (n + 1) / 2, 0.0);
        return j;
    }

    static Jet2 variable(double v, std::size_t n, std::size_t index) {
        Jet2 j = constant(v, n);
        j.grad_[index] = 1.0;
        return j;
    }

    std::size_t vars() const { return grad_.size(); }
    double value() const { return value_; }
    double& value() { return value_; }
    double grad(std::size_t i) const { return grad_[i]; }
    double& grad(std::size_t i) { return grad_[i]; }
    double hess(std::size_t i, std::size_t j) const { return hess_[pack(i, j)]; }
    double& hess(std::size_t i, std::size_t j) { return hess_[pack(i, j)]; }

    const std::vector<double>& grad_data() const { return grad_; }
    const std::vector<double>& hess_data() const { return hess_; }

  private:
    static std::size_t pack(std::size_t i, std::size_t j) {
        return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
    }

    double value_ = 0.0;
    std::vector<double> grad_;
    std::vector<double> hess_; // packed lower triangle

    friend Jet2 operator+(const Jet2&, const Jet2&);
    friend Jet2 operator-(const Jet2&, const Jet2&);
    friend Jet2 operator-(const Jet2&);
    friend Jet2 operator*(const Jet2&, const Jet2&);
    friend Jet2 operator/(const Jet2&, const Jet2&);
    friend Jet2 chain_unary(const Jet2&, double, double, double);
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    assert(a.vars() == b.vars());
    Jet2 c = a;
    c.value_ += b.value_;
    for (std::size_t i = 0; i < c.grad_.size(); ++i) c.grad_[i] += b.grad_[i];
    for (std::size_t i = 0; i < c.hess_.size(); ++i) c.hess_[i] += b.hess_[i];
    return c;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    assert(a.vars() == b.vars());
    Jet2 c = a;
    c.value_ -= b.value_;
    for (std::size_t i = 0; i < c.grad_.size(); ++i) c.grad_[i] -= b.grad_[i];
    for (std::size_t i = 0; i < c.hess_.size(); ++i) c.hess_[i] -= b.hess_[i];
    return c;
}

inline Jet2 operator-(const Jet2& a) {
    Jet2 c = a;
    c.value_ = -c.value_;
    for (auto& g : c.grad_) g = -g;
    for (auto& h : c.hess_) h = -h;
    return c;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    assert(a.vars() == b.vars());
    const std::size_t n = a.vars();
    Jet2 c = Jet2::constant(0.0, n);
    c.value_ = a.value_ * b.value_;
    for (std::size_t i = 0; i < n; ++i)
        c.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j, ++k)
            c.hess_[k] = a.value_ * b.hess_[k] + b.value_ * a.hess_[k] +
                         a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
    return c;
}

/// Quotient rule applied directly: g' = (a' - g b')/b where g = a/b.
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    assert(a.vars() == b.vars());
    const std::size_t n = a.vars();
    Jet2 c = Jet2::constant(0.0, n);
    c.value_ = a.value_ / b.value_;
    for (std::size_t i = 0; i < n; ++i)
        c.grad_[i] = (a.grad_[i] - c.value_ * b.grad_[i]) / b.value_;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j, ++k)
            c.hess_[k] = (a.hess_[k] - c.value_ * b.hess_[k] - c.grad_[i] * b.grad_[j] -
                          c.grad_[j] * b.grad_[i]) /
                         b.value_;
    return c;
}

/// Composition with a scalar function given its value and first two
/// derivatives at the jet's value.
inline Jet2 chain_unary(const Jet2& x, double f, double fp, double fpp) {
    const std::size_t n = x.vars();
    Jet2 c = Jet2::constant(f, n);
    for (std::size_t i = 0; i < n; ++i) c.grad_[i] = fp * x.grad_[i];
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j, ++k)
            c.hess_[k] = fp * x.hess_[k] + fpp * x.grad_[i] * x.grad_[j];
    return c;
}

inline Jet2 sin(const Jet2& x) {
    return chain_unary(x, std::sin(x.value()), std::cos(x.value()), -std::sin(x.value()));
}
inline Jet2 cos(const Jet2& x) {
    return chain_unary(x, std::cos(x.value()), -std::sin(x.value()), -std::cos(x.value()));
}
inline Jet2 sinh(const Jet2& x) {
    return chain_unary(x, std::sinh(x.value()), std::cosh(x.value()), std::sinh(x.value()));
}
inline Jet2 cosh(const Jet2& x) {
    return chain_unary(x, std::cosh(x.value()), std::sinh(x.value()), std::cosh(x.value()));
}
inline Jet2 tanh(const Jet2& x) {
    const double t = std::tanh(x.value());
    const double sech2 = 1.0 - t * t;
    return chain_unary(x, t, sech2, -2.0 * t * sech2);
}
inline Jet2 exp(const Jet2& x) {
    const double e = std::exp(x.value());
    return chain_unary(x, e, e, e);
}
inline Jet2 log(const Jet2& x) {
    const double v = x.value();
    return chain_unary(x, std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline Jet2 sqrt(const Jet2& x) {
    const double s = std::sqrt(x.value());
    return chain_unary(x, s, 0.5 / s, -0.25 / (s * x.value()));
}

/// x^e for a real exponent; the caller is responsible for domain checks
/// (positive base for fractional exponents, nonzero base for negative ones).
inline Jet2 pow(const Jet2& x, double e) {
    const double v = x.value();
    const double f = std::pow(v, e);
    const double fp = e == 0.0 ? 0.0 : e * std::pow(v, e - 1.0);
    const double fpp = (e == 0.0 || e == 1.0) ? 0.0 : e * (e - 1.0) * std::pow(v, e - 2.0);
    return chain_unary(x, f, fp, fpp);
}

} // namespace warpcheck
