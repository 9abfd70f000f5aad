#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "warpcheck/warped.hpp"

namespace warpcheck {

/// Default RNG seed for verification runs (configs may override).
inline constexpr std::uint64_t kDefaultSeed = 0xC05405ULL;

/// Deterministic sampling request over a chart domain.
struct SamplePlan {
    std::size_t count = 100;
    std::uint64_t seed = kDefaultSeed;
    DomainHints domain;
};

SamplePlan plan_for_chart(const MetricChart& chart, std::size_t count, std::uint64_t seed);

std::vector<std::vector<double>> sample_points(const SamplePlan& plan);

struct ConstancyStats {
    double mean = 0.0;
    double std = 0.0;
    bool is_constant = false;
};

/// Population mean/std; a sample set counts as constant when the spread is
/// below 1e-8 relative to max(1, |mean|) (jet arithmetic noise is ~1e-12).
ConstancyStats constancy(const std::vector<double>& values);

/// Per-point residual summary (feeds the CSV output).
struct ResidualRow {
    std::vector<double> point;
    double max_abs = 0.0;
    double max_rel = 0.0;
};

struct VerificationReport {
    double lambda_bar_used = 0.0;
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    ConstancyStats lambda_bar_stats;
    ConstancyStats lambda_fiber_stats;
    double oracle_diff = 0.0;
    // per-quantity: "agrees" | "disagrees" | "not_applicable"
    std::map<std::string, std::string> sign_agreement;
    bool pass = false;
    double tol_residual = 1e-6;
    double tol_oracle_diff = 1e-6;
    std::vector<ResidualRow> rows;
};

/// Max over samples and components of |G_ab + lambda ḡ_ab|, absolute and
/// relative to max(1, max|ḡ_ab|) per point. pass <=> max_rel <= tol.
VerificationReport einstein_residual(const MetricChart& chart, double lambda,
                                     const SamplePlan& plan, double tol = 1e-6);

/// Max relative difference between the closed-form warped curvature and the
/// brute-force bundle on the assembled product chart, over Ricci/scalar/
/// Einstein components at the plan's sample points. Component metric:
/// |a-b| / max(1e-3, |a|, |b|).
double oracle_diff(const WarpedProduct& w, const SamplePlan& plan);

/// Least-squares fit of G = -lambda g at one point: lambda = -<G,g>/<g,g>
/// over all components. Exact when the chart is an exact solution.
double pointwise_lambda(const MetricChart& chart, std::span<const double> p);

/// pointwise_lambda across the plan's samples (order = sample order).
std::vector<double> lambda_samples(const MetricChart& chart, const SamplePlan& plan);

/// Mean of lambda_samples: the oracle's cosmological constant estimate.
double oracle_lambda(const MetricChart& chart, const SamplePlan& plan);

/// Sign comparison with an effective-zero band at 1e-9:
/// both zero -> "not_applicable", mixed zero or opposite signs ->
/// "disagrees", same sign -> "agrees".
std::string sign_agreement(double stated, double oracle);

} // namespace warpcheck
