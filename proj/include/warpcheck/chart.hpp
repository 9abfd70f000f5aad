#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "warpcheck/expr.hpp"
#include "warpcheck/linalg.hpp"

namespace warpcheck {

/// Default radius, in coordinate units, of the neighborhood excluded around a
/// declared singular locus (sphere poles, warping-function zeros, ...).
inline constexpr double kDefaultExclusionRadius = 1e-2;

/// Smallest admissible |det g|; points below this are rejected as degenerate.
inline constexpr double kDegenerateDet = 1e-12;

/// Band around a single coordinate value that sampling must avoid.
struct Exclusion {
    std::size_t coord = 0;
    double center = 0.0;
    double radius = kDefaultExclusionRadius;
};

/// Per-coordinate sampling bounds plus excluded neighborhoods.
struct DomainHints {
    std::vector<std::array<double, 2>> bounds; // [lo, hi] per coordinate
    std::vector<Exclusion> exclusions;
};

/// Deterministic rejection sampler over the hinted domain. Throws
/// GeometryError if no admissible point can be found.
std::vector<std::vector<double>> sample_admissible(const DomainHints& hints,
                                                   std::size_t count, std::uint64_t seed);

/// Uniform draw in [lo, hi) from raw engine bits (53-bit mantissa scaling),
/// bitwise reproducible across platforms unlike the standard distributions.
double uniform_in(std::mt19937_64& rng, double lo, double hi);

/// Metric components together with their first and second coordinate
/// derivatives at a point, all exact (jet-propagated). dg(k,i,j) = d_k g_ij,
/// d2g(k,l,i,j) = d_k d_l g_ij; symmetry in (i,j) and in (k,l) is bitwise.
struct MetricJets {
    Matrix g;
    Tensor3 dg;
    Tensor4 d2g;
};

/// A coordinate chart with a symmetric metric given componentwise as
/// expressions of the coordinates. Immutable after construction; construction
/// validates symmetry, nondegeneracy, and the declared signature on a
/// deterministic sample of the hinted domain.
class MetricChart {
  public:
    /// `components` is the full dim*dim matrix in row-major order; entries
    /// (i,j) and (j,i) must agree in value. `signature` lists +-1 per
    /// coordinate direction (order-insensitive; only the sign counts matter).
    /// Empty bounds default to [-1,1] per coordinate.
    MetricChart(std::vector<std::string> coords, std::vector<Expression> components,
                std::vector<int> signature, DomainHints hints);

    std::size_t dim() const { return coords_.size(); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<int>& signature() const { return signature_; }
    const DomainHints& hints() const { return hints_; }

    /// Component expression; (i,j) and (j,i) return the same object.
    const Expression& component(std::size_t i, std::size_t j) const {
        return upper_[pack(i, j)];
    }

    /// Metric values at a point (bitwise symmetric).
    Matrix metric(std::span<const double> point) const;

    /// Metric with exact first and second derivatives at a point.
    MetricJets metric_jets(std::span<const double> point) const;

  private:
    // Packed upper-triangle index for i <= j; mirrored otherwise.
    std::size_t pack(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        const std::size_t d = coords_.size();
        return i * d - i * (i + 1) / 2 + j;
    }

    std::vector<std::string> coords_;
    std::vector<Expression> upper_; // packed upper triangle, see pack()
    std::vector<int> signature_;
    DomainHints hints_;
};

/// A scalar function of chart coordinates; evaluation and exact derivatives
/// come from the expression engine.
using ScalarField = Expression;

/// Everything the curvature formulas need at one point of one chart.
/// christoffel(k,i,j) = Gamma^k_ij; riemann(l,i,j,k) = R^l_ijk with
/// R^l_ijk = d_j Gamma^l_ik - d_k Gamma^l_ij
///         + Gamma^l_jm Gamma^m_ik - Gamma^l_km Gamma^m_ij;
/// ricci_ij = R^k_ikj; scalar = g^ij ricci_ij; einstein = ricci - scalar/2 g.
struct CurvatureBundle {
    std::vector<double> point;
    Tensor3 christoffel;
    Tensor4 riemann;
    Matrix ricci;
    double scalar = 0.0;
    Matrix einstein;
};

/// Second covariant derivative data of a scalar field at a point:
/// hessian_ij = d_i d_j psi - Gamma^k_ij d_k psi, laplacian = g^ij hessian_ij,
/// grad_norm_sq = g^ij d_i psi d_j psi. On a (-1)-signature time axis these
/// reduce to -f'' and -f'^2 with hessian_tt = f''.
struct FieldCalculus {
    double value = 0.0;
    std::vector<double> grad;
    Matrix hessian;
    double laplacian = 0.0;
    double grad_norm_sq = 0.0;
};

/// Gamma^k_ij = g^kl (d_j g_il + d_i g_jl - d_l g_ij) / 2, exact derivatives.
Tensor3 christoffel(const MetricChart& chart, std::span<const double> p);

/// Full curvature data by direct coordinate differentiation. Derivatives of
/// Gamma are obtained by rerunning the Christoffel assembly (metric inverse
/// included) over first-order dual numbers seeded with the exact metric jets,
/// so no finite differences enter anywhere.
CurvatureBundle curvature_bundle(const MetricChart& chart, std::span<const double> p);

FieldCalculus field_calculus(const MetricChart& chart, const ScalarField& psi,
                             std::span<const double> p);

} // namespace warpcheck
