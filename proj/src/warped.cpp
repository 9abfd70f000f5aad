#include "warpcheck/warped.hpp"

#include <cmath>
#include <set>
#include <string>

namespace warpcheck {
namespace {

constexpr std::uint64_t kPositivitySeed = 0xF00DF00DULL;

MetricChart build_product_chart(const MetricChart& base, const MetricChart& fiber,
                                const ScalarField& f) {
    const std::size_t m = base.dim();
    const std::size_t n = fiber.dim();
    const std::size_t d = m + n;

    std::vector<std::string> coords = base.coords();
    coords.insert(coords.end(), fiber.coords().begin(), fiber.coords().end());

    const Expression f_prod = f.remap_coords(coords, 0);
    const Expression zero = constant_expression(0.0, coords);

    std::vector<Expression> comps(d * d, zero);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            comps[i * d + j] = base.component(i, j).remap_coords(coords, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const Expression h = fiber.component(a, b).remap_coords(coords, m);
            comps[(m + a) * d + (m + b)] = multiply(multiply(f_prod, f_prod), h);
        }

    std::vector<int> signature = base.signature();
    signature.insert(signature.end(), fiber.signature().begin(), fiber.signature().end());

    DomainHints hints;
    hints.bounds = base.hints().bounds;
    hints.bounds.insert(hints.bounds.end(), fiber.hints().bounds.begin(),
                        fiber.hints().bounds.end());
    hints.exclusions = base.hints().exclusions;
    for (Exclusion e : fiber.hints().exclusions) {
        e.coord += m;
        hints.exclusions.push_back(e);
    }

    return MetricChart(std::move(coords), std::move(comps), std::move(signature),
                       std::move(hints));
}

} // namespace

WarpedProduct assemble(const MetricChart& base, const MetricChart& fiber,
                       const ScalarField& f) {
    if (f.coords() != base.coords())
        throw GeometryError("warping function must be defined over the base coordinates");
    {
        std::set<std::string> names(base.coords().begin(), base.coords().end());
        for (const std::string& c : fiber.coords())
            if (names.count(c))
                throw GeometryError("base and fiber share coordinate name '" + c + "'");
    }
    for (const auto& p : sample_admissible(base.hints(), 32, kPositivitySeed)) {
        const double v = f.value(p);
        if (!(v > 0.0))
            throw GeometryError("warping function must be positive on the base domain");
    }
    return WarpedProduct{base, fiber, f, build_product_chart(base, fiber, f)};
}

WarpedCurvature closed_form_curvature(const WarpedProduct& w, std::span<const double> p) {
    const std::size_t m = w.base_dim();
    const std::size_t n = w.fiber_dim();
    if (p.size() != m + n) throw std::invalid_argument("product point has wrong dimension");
    const std::span<const double> pb = p.subspan(0, m);
    const std::span<const double> pf = p.subspan(m, n);

    const CurvatureBundle cb = curvature_bundle(w.base, pb);
    const CurvatureBundle cf = curvature_bundle(w.fiber, pf);
    const FieldCalculus fc = field_calculus(w.base, w.f, pb);
    const Matrix g = w.base.metric(pb);
    const Matrix h = w.fiber.metric(pf);

    const double fv = fc.value;
    if (!(fv > 0.0)) throw GeometryError("warping function must be positive");
    const double nn = static_cast<double>(n);
    const double lap_over_f = fc.laplacian / fv;
    const double grad_over_f2 = fc.grad_norm_sq / (fv * fv);

    WarpedCurvature out;
    out.ric_base = Matrix(m);
    out.ein_base = Matrix(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            out.ric_base(i, j) = cb.ricci(i, j) - (nn / fv) * fc.hessian(i, j);

    out.ric_mixed.assign(m * n, 0.0);
    out.ein_mixed.assign(m * n, 0.0);

    const double fiber_ric_coeff = lap_over_f + (nn - 1.0) * grad_over_f2;
    out.ric_fiber = Matrix(n);
    out.ein_fiber = Matrix(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            out.ric_fiber(a, b) = cf.ricci(a, b) - fiber_ric_coeff * fv * fv * h(a, b);

    const double scalar_warp = cf.scalar / (fv * fv) - 2.0 * nn * lap_over_f -
                               nn * (nn - 1.0) * grad_over_f2;
    out.scalar = cb.scalar + scalar_warp;

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            out.ein_base(i, j) = cb.einstein(i, j) - (nn / fv) * fc.hessian(i, j) -
                                 0.5 * scalar_warp * g(i, j);

    const double ein_fiber_coeff = (1.0 - nn) * lap_over_f + 0.5 * cb.scalar +
                                   0.5 * (nn - 1.0) * (2.0 - nn) * grad_over_f2;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            out.ein_fiber(a, b) =
                cf.einstein(a, b) - fv * fv * ein_fiber_coeff * h(a, b);

    return out;
}

double lambda_bar(const WarpedProduct& w, std::span<const double> base_point) {
    const double m = static_cast<double>(w.base_dim());
    const double n = static_cast<double>(w.fiber_dim());
    if (w.base_dim() + w.fiber_dim() <= 2)
        throw GeometryError("lambda_bar requires total dimension > 2");
    const CurvatureBundle cb = curvature_bundle(w.base, base_point);
    const FieldCalculus fc = field_calculus(w.base, w.f, base_point);
    if (!(fc.value > 0.0)) throw GeometryError("warping function must be positive");
    return -((m + n - 2.0) / (2.0 * m)) * (n * fc.laplacian / fc.value - cb.scalar);
}

FiberCondition fiber_einstein_condition(const WarpedProduct& w,
                                        std::span<const double> base_point) {
    const double m = static_cast<double>(w.base_dim());
    const double n = static_cast<double>(w.fiber_dim());
    const CurvatureBundle cb = curvature_bundle(w.base, base_point);
    const FieldCalculus fc = field_calculus(w.base, w.f, base_point);
    const double fv = fc.value;
    if (!(fv > 0.0)) throw GeometryError("warping function must be positive");
    FiberCondition out;
    out.ric_coeff = fv * fv *
                    ((fc.laplacian / fv) * (1.0 - n / m) + cb.scalar / m +
                     (n - 1.0) * fc.grad_norm_sq / (fv * fv));
    out.lambda_fiber = -(1.0 - n / 2.0) * out.ric_coeff;
    return out;
}

EigenvalueCheck eigenvalue_check(const WarpedProduct& w, double lambda,
                                 std::span<const double> base_point) {
    const double m = static_cast<double>(w.base_dim());
    const double n = static_cast<double>(w.fiber_dim());
    if (w.base_dim() + w.fiber_dim() <= 2)
        throw GeometryError("eigenvalue_check requires total dimension > 2");
    const CurvatureBundle cb = curvature_bundle(w.base, base_point);
    const FieldCalculus fc = field_calculus(w.base, w.f, base_point);
    const double denom = n * (m + n - 2.0);
    EigenvalueCheck out;
    out.residual_derived =
        fc.laplacian - fc.value * ((m + n - 2.0) * cb.scalar - 2.0 * m * lambda) / denom;
    out.residual_stated =
        fc.laplacian - fc.value * (2.0 * m * lambda + (m + n - 2.0) * cb.scalar) / denom;
    return out;
}

} // namespace warpcheck
