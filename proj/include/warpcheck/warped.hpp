#pragma once

#include "warpcheck/chart.hpp"

namespace warpcheck {

/// Warped product of a base chart (dim m) and a fiber chart (dim n) by a
/// positive warping function f on the base. The derived product chart has
/// block metric: base block g_ij, mixed block 0, fiber block f^2 h_ab.
struct WarpedProduct {
    MetricChart base;
    MetricChart fiber;
    ScalarField f; // over the base coordinates
    MetricChart product;

    std::size_t base_dim() const { return base.dim(); }
    std::size_t fiber_dim() const { return fiber.dim(); }
};

/// Closed-form curvature blocks of the warped metric, computed from factor
/// curvature plus the warping function's covariant calculus only (never from
/// the assembled product chart; that is the brute-force oracle's job).
struct WarpedCurvature {
    Matrix ric_base;                // m x m
    std::vector<double> ric_mixed;  // m*n row-major, identically zero
    Matrix ric_fiber;               // n x n
    double scalar = 0.0;
    Matrix ein_base;
    std::vector<double> ein_mixed; // identically zero
    Matrix ein_fiber;
};

/// Pointwise fiber-side Einstein data induced by the base and warping:
/// ric_coeff is the multiple of h that the fiber Ricci tensor must equal,
/// lambda_fiber = -(1 - n/2) * ric_coeff the induced fiber constant.
struct FiberCondition {
    double lambda_fiber = 0.0;
    double ric_coeff = 0.0;
};

/// Residuals of Delta f = eigenvalue * f under the two candidate eigenvalues:
/// `derived` uses ((m+n-2)S - 2m*lambda)/(n(m+n-2)) (solving the constant-
/// curvature relation for Delta f / f); `stated` uses the opposite-sign form
/// (2m*lambda + (m+n-2)S)/(n(m+n-2)) that accompanies the classification's
/// sign convention. Both are reported so any sign mismatch is machine-visible.
struct EigenvalueCheck {
    double residual_derived = 0.0;
    double residual_stated = 0.0;
};

/// Build the product chart. Throws GeometryError on coordinate-name
/// collisions or if f fails to be positive on a sample of the base domain.
WarpedProduct assemble(const MetricChart& base, const MetricChart& fiber,
                       const ScalarField& f);

/// Curvature of the warped metric from the closed-form block formulas,
/// evaluated at a product point (base coords first, fiber coords after).
WarpedCurvature closed_form_curvature(const WarpedProduct& w, std::span<const double> p);

/// The cosmological constant forced at a base point when the warped metric
/// is assumed Einstein: -((m+n-2)/(2m)) (n Delta f / f - S_base). Constant
/// across points exactly when the metric really is an exact solution.
double lambda_bar(const WarpedProduct& w, std::span<const double> base_point);

FiberCondition fiber_einstein_condition(const WarpedProduct& w,
                                        std::span<const double> base_point);

EigenvalueCheck eigenvalue_check(const WarpedProduct& w, double lambda,
                                 std::span<const double> base_point);

} // namespace warpcheck
