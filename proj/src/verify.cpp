#include "warpcheck/verify.hpp"

#include <cmath>
#include <stdexcept>

namespace warpcheck {
namespace {

// Relative difference with an absolute floor: equals |a-b|/max(|a|,|b|) for
// O(1) components and |a-b|/1e-3 for near-zero ones, so a 1e-6 threshold
// also enforces a 1e-9 absolute floor.
double component_diff(double a, double b) {
    return std::fabs(a - b) / std::max({1e-3, std::fabs(a), std::fabs(b)});
}

} // namespace

SamplePlan plan_for_chart(const MetricChart& chart, std::size_t count, std::uint64_t seed) {
    SamplePlan plan;
    plan.count = count;
    plan.seed = seed;
    plan.domain = chart.hints();
    return plan;
}

std::vector<std::vector<double>> sample_points(const SamplePlan& plan) {
    return sample_admissible(plan.domain, plan.count, plan.seed);
}

ConstancyStats constancy(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("constancy of an empty sample");
    ConstancyStats out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(var / static_cast<double>(values.size()));
    out.is_constant = out.std <= 1e-8 * std::max(1.0, std::fabs(out.mean));
    return out;
}

VerificationReport einstein_residual(const MetricChart& chart, double lambda,
                                     const SamplePlan& plan, double tol) {
    VerificationReport report;
    report.lambda_bar_used = lambda;
    report.tol_residual = tol;
    const std::size_t d = chart.dim();
    for (const auto& p : sample_points(plan)) {
        const Matrix g = chart.metric(p);
        const CurvatureBundle cb = curvature_bundle(chart, p);
        double metric_scale = 1.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                metric_scale = std::max(metric_scale, std::fabs(g(i, j)));
        double max_abs = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                max_abs = std::max(max_abs,
                                   std::fabs(cb.einstein(i, j) + lambda * g(i, j)));
        ResidualRow row;
        row.point = p;
        row.max_abs = max_abs;
        row.max_rel = max_abs / metric_scale;
        report.max_abs_residual = std::max(report.max_abs_residual, row.max_abs);
        report.max_rel_residual = std::max(report.max_rel_residual, row.max_rel);
        report.rows.push_back(std::move(row));
    }
    report.pass = report.max_rel_residual <= tol;
    return report;
}

double oracle_diff(const WarpedProduct& w, const SamplePlan& plan) {
    const std::size_t m = w.base_dim();
    const std::size_t n = w.fiber_dim();
    double worst = 0.0;
    for (const auto& p : sample_points(plan)) {
        const CurvatureBundle oracle = curvature_bundle(w.product, p);
        const WarpedCurvature cf = closed_form_curvature(w, p);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                worst = std::max(worst, component_diff(oracle.ricci(i, j), cf.ric_base(i, j)));
                worst = std::max(worst,
                                 component_diff(oracle.einstein(i, j), cf.ein_base(i, j)));
            }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t a = 0; a < n; ++a) {
                worst = std::max(worst, component_diff(oracle.ricci(i, m + a),
                                                       cf.ric_mixed[i * n + a]));
                worst = std::max(worst, component_diff(oracle.einstein(i, m + a),
                                                       cf.ein_mixed[i * n + a]));
            }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                worst = std::max(
                    worst, component_diff(oracle.ricci(m + a, m + b), cf.ric_fiber(a, b)));
                worst = std::max(worst, component_diff(oracle.einstein(m + a, m + b),
                                                       cf.ein_fiber(a, b)));
            }
        worst = std::max(worst, component_diff(oracle.scalar, cf.scalar));
    }
    return worst;
}

double pointwise_lambda(const MetricChart& chart, std::span<const double> p) {
    const Matrix g = chart.metric(p);
    const CurvatureBundle cb = curvature_bundle(chart, p);
    const std::size_t d = chart.dim();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            num += cb.einstein(i, j) * g(i, j);
            den += g(i, j) * g(i, j);
        }
    return -num / den;
}

std::vector<double> lambda_samples(const MetricChart& chart, const SamplePlan& plan) {
    std::vector<double> out;
    for (const auto& p : sample_points(plan)) out.push_back(pointwise_lambda(chart, p));
    return out;
}

double oracle_lambda(const MetricChart& chart, const SamplePlan& plan) {
    return constancy(lambda_samples(chart, plan)).mean;
}

std::string sign_agreement(double stated, double oracle) {
    const bool zs = std::fabs(stated) < 1e-9;
    const bool zo = std::fabs(oracle) < 1e-9;
    if (zs && zo) return "not_applicable";
    if (zs != zo) return "disagrees";
    return (stated > 0.0) == (oracle > 0.0) ? "agrees" : "disagrees";
}

} // namespace warpcheck
