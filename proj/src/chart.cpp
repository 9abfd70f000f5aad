#include "warpcheck/chart.hpp"

#include <cmath>
#include <random>
#include <set>

namespace warpcheck {

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

namespace {

bool admissible(const std::vector<double>& p, const DomainHints& hints) {
    for (const Exclusion& e : hints.exclusions)
        if (std::fabs(p[e.coord] - e.center) < e.radius) return false;
    return true;
}

// Seed for the small construction-time validation sample.
constexpr std::uint64_t kValidationSeed = 0x5EEDCAFEULL;

} // namespace

std::vector<std::vector<double>> sample_admissible(const DomainHints& hints,
                                                   std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t dim = hints.bounds.size();
    std::vector<std::vector<double>> points;
    points.reserve(count);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * count + 1000;
    std::vector<double> p(dim);
    while (points.size() < count) {
        if (++attempts > max_attempts) throw GeometryError("no admissible samples in domain");
        for (std::size_t i = 0; i < dim; ++i) {
            const auto& [lo, hi] = hints.bounds[i];
            p[i] = uniform_in(rng, lo, hi);
        }
        if (admissible(p, hints)) points.push_back(p);
    }
    return points;
}

MetricChart::MetricChart(std::vector<std::string> coords, std::vector<Expression> components,
                         std::vector<int> signature, DomainHints hints)
    : coords_(std::move(coords)), signature_(std::move(signature)), hints_(std::move(hints)) {
    const std::size_t d = coords_.size();
    if (d == 0) throw GeometryError("chart needs at least one coordinate");
    {
        std::set<std::string> seen(coords_.begin(), coords_.end());
        if (seen.size() != d) throw GeometryError("duplicate coordinate names");
    }
    if (components.size() != d * d)
        throw GeometryError("metric component count must be dim*dim");
    if (signature_.size() != d) throw GeometryError("signature length must equal dim");
    for (int s : signature_)
        if (s != 1 && s != -1) throw GeometryError("signature entries must be +1 or -1");
    if (hints_.bounds.empty()) hints_.bounds.assign(d, {-1.0, 1.0});
    if (hints_.bounds.size() != d) throw GeometryError("bounds length must equal dim");
    for (const auto& [lo, hi] : hints_.bounds)
        if (!(lo < hi)) throw GeometryError("empty coordinate bounds");
    for (const Exclusion& e : hints_.exclusions)
        if (e.coord >= d) throw GeometryError("exclusion names an unknown coordinate");

    upper_.reserve(d * (d + 1) / 2);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) upper_.push_back(components[i * d + j]);

    int expected_neg = 0;
    for (int s : signature_)
        if (s < 0) ++expected_neg;

    // Validate symmetry, nondegeneracy, and signature on a deterministic
    // sample of the domain.
    const auto sample = sample_admissible(hints_, 12, kValidationSeed);
    for (const auto& p : sample) {
        double scale = 0.0;
        Matrix g(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                g(i, j) = components[i * d + j].value(p);
                scale = std::max(scale, std::fabs(g(i, j)));
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (std::fabs(g(i, j) - g(j, i)) > 1e-12 * std::max(1.0, scale))
                    throw GeometryError("metric components are not symmetric");
        if (std::fabs(determinant(g)) < kDegenerateDet)
            throw GeometryError("metric is numerically degenerate on the sampled domain");
        int neg = 0;
        for (double ev : sym_eigenvalues(g))
            if (ev < 0.0) ++neg;
        if (neg != expected_neg)
            throw GeometryError("metric eigenvalue signs do not match the declared signature");
    }
}

Matrix MetricChart::metric(std::span<const double> point) const {
    const std::size_t d = dim();
    Matrix g(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j)
            g(i, j) = g(j, i) = upper_[pack(i, j)].value(point);
    return g;
}

MetricJets MetricChart::metric_jets(std::span<const double> point) const {
    const std::size_t d = dim();
    MetricJets out;
    out.g = Matrix(d);
    out.dg = Tensor3(d);
    out.d2g = Tensor4(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            const Jet2 jet = upper_[pack(i, j)].jet2(point);
            out.g(i, j) = out.g(j, i) = jet.value();
            for (std::size_t k = 0; k < d; ++k) {
                out.dg(k, i, j) = out.dg(k, j, i) = jet.grad(k);
                for (std::size_t l = 0; l < d; ++l) {
                    const double h = jet.hess(k, l);
                    out.d2g(k, l, i, j) = h;
                    out.d2g(k, l, j, i) = h;
                }
            }
        }
    return out;
}

namespace {

// Gamma^k_ij over any scalar type with the metric inverse precomputed.
// DgFn(k,i,j) must return d_k g_ij as a T.
template <class T, class DgFn>
std::vector<T> christoffel_generic(const SquareMatrix<T>& ginv, DgFn dg, std::size_t d) {
    const T zero = zero_like(ginv(0, 0));
    std::vector<T> gamma(d * d * d, zero);
    auto at = [d](std::size_t k, std::size_t i, std::size_t j) {
        return (k * d + i) * d + j;
    };
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                T sum = zero;
                for (std::size_t l = 0; l < d; ++l) {
                    T dsum = dg(j, i, l) + dg(i, j, l) - dg(l, i, j);
                    sum = sum + ginv(k, l) * dsum;
                }
                gamma[at(k, i, j)] = 0.5 * sum;
                gamma[at(k, j, i)] = gamma[at(k, i, j)];
            }
    return gamma;
}

} // namespace

Tensor3 christoffel(const MetricChart& chart, std::span<const double> p) {
    const std::size_t d = chart.dim();
    const MetricJets mj = chart.metric_jets(p);
    const Matrix ginv = inverse(mj.g, kDegenerateDet);
    auto dg = [&mj](std::size_t k, std::size_t i, std::size_t j) { return mj.dg(k, i, j); };
    const std::vector<double> flat = christoffel_generic<double>(ginv, dg, d);
    Tensor3 gamma(d);
    gamma.a = flat;
    return gamma;
}

CurvatureBundle curvature_bundle(const MetricChart& chart, std::span<const double> p) {
    const std::size_t d = chart.dim();
    const MetricJets mj = chart.metric_jets(p);

    // Lift the metric and its first derivatives to dual numbers whose partials
    // are the next-order derivatives; rerunning the Christoffel assembly then
    // yields Gamma and d Gamma exactly.
    SquareMatrix<Dual> gD(d, Dual(0.0, d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Dual e(mj.g(i, j), d);
            for (std::size_t k = 0; k < d; ++k) e.d[k] = mj.dg(k, i, j);
            gD(i, j) = std::move(e);
        }
    auto dgD = [&mj, d](std::size_t k, std::size_t i, std::size_t j) {
        Dual e(mj.dg(k, i, j), d);
        for (std::size_t l = 0; l < d; ++l) e.d[l] = mj.d2g(k, l, i, j);
        return e;
    };
    const SquareMatrix<Dual> ginvD = inverse(gD, kDegenerateDet);
    const std::vector<Dual> gammaD = christoffel_generic<Dual>(ginvD, dgD, d);

    auto at = [d](std::size_t k, std::size_t i, std::size_t j) {
        return (k * d + i) * d + j;
    };

    CurvatureBundle out;
    out.point.assign(p.begin(), p.end());
    out.christoffel = Tensor3(d);
    Tensor4 dgamma(d); // (m,k,i,j) = d_m Gamma^k_ij
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const Dual& e = gammaD[at(k, i, j)];
                out.christoffel(k, i, j) = e.v;
                for (std::size_t m = 0; m < d; ++m) dgamma(m, k, i, j) = e.d[m];
            }

    const Tensor3& G = out.christoffel;
    out.riemann = Tensor4(d);
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = j + 1; k < d; ++k) {
                    double r = dgamma(j, l, i, k) - dgamma(k, l, i, j);
                    for (std::size_t m = 0; m < d; ++m)
                        r += G(l, j, m) * G(m, i, k) - G(l, k, m) * G(m, i, j);
                    out.riemann(l, i, j, k) = r;
                    out.riemann(l, i, k, j) = -r; // antisymmetry is structural
                }

    out.ricci = Matrix(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            double r = 0.0;
            for (std::size_t k = 0; k < d; ++k) r += out.riemann(k, i, k, j);
            out.ricci(i, j) = out.ricci(j, i) = r;
        }

    Matrix ginv(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) ginv(i, j) = ginvD(i, j).v;
    out.scalar = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out.scalar += ginv(i, j) * out.ricci(i, j);

    out.einstein = Matrix(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j)
            out.einstein(i, j) = out.einstein(j, i) =
                out.ricci(i, j) - 0.5 * out.scalar * mj.g(i, j);
    return out;
}

FieldCalculus field_calculus(const MetricChart& chart, const ScalarField& psi,
                             std::span<const double> p) {
    const std::size_t d = chart.dim();
    const Jet2 jet = psi.jet2(p);
    const Matrix g = chart.metric(p);
    const Matrix ginv = inverse(g, kDegenerateDet);
    const Tensor3 gamma = christoffel(chart, p);

    FieldCalculus out;
    out.value = jet.value();
    out.grad = jet.grad_data();
    out.hessian = Matrix(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            double h = jet.hess(i, j);
            for (std::size_t k = 0; k < d; ++k) h -= gamma(k, i, j) * jet.grad(k);
            out.hessian(i, j) = out.hessian(j, i) = h;
        }
    out.laplacian = 0.0;
    out.grad_norm_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            out.laplacian += ginv(i, j) * out.hessian(i, j);
            out.grad_norm_sq += ginv(i, j) * jet.grad(i) * jet.grad(j);
        }
    return out;
}

} // namespace warpcheck
