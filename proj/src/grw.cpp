#include "warpcheck/grw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>

namespace warpcheck {
namespace {

const std::vector<std::string> kTimeCoord = {"t"};

std::array<double, 2> sorted_interval(double a, double b) {
    return a <= b ? std::array<double, 2>{a, b} : std::array<double, 2>{b, a};
}

} // namespace

const char* family_name(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::Exp: return "exp";
    case FamilyKind::Cosh: return "cosh";
    case FamilyKind::Sinh: return "sinh";
    case FamilyKind::Cos: return "cos";
    case FamilyKind::Linear: return "linear";
    }
    return "?";
}

FamilyKind family_from_name(const std::string& name) {
    static const std::map<std::string, FamilyKind> table = {
        {"exp", FamilyKind::Exp},   {"cosh", FamilyKind::Cosh},
        {"sinh", FamilyKind::Sinh}, {"cos", FamilyKind::Cos},
        {"linear", FamilyKind::Linear},
    };
    auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown family name '" + name + "'");
    return it->second;
}

const char* fiber_kind_name(FiberKind kind) {
    switch (kind) {
    case FiberKind::Sphere: return "sphere";
    case FiberKind::Hyperbolic: return "hyperbolic";
    case FiberKind::Flat: return "flat";
    }
    return "?";
}

FiberKind fiber_kind_from_name(const std::string& name) {
    static const std::map<std::string, FiberKind> table = {
        {"sphere", FiberKind::Sphere},
        {"hyperbolic", FiberKind::Hyperbolic},
        {"flat", FiberKind::Flat},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument("unknown fiber kind '" + name + "'");
    return it->second;
}

GRWFamily make_family(FamilyKind kind, std::size_t n, double k, double L, double b) {
    if (n <= 1) throw GeometryError("family fiber dimension must exceed 1");
    if (L == 0.0) throw GeometryError("family scale L must be nonzero");
    if (kind != FamilyKind::Linear && !(k > 0.0))
        throw GeometryError("family scale k must be positive");
    GRWFamily fam;
    fam.kind = kind;
    fam.n = n;
    fam.k = kind == FamilyKind::Linear ? 1.0 : k;
    fam.L = L;
    fam.b = b;
    switch (kind) {
    case FamilyKind::Exp:
    case FamilyKind::Cosh:
        break;
    case FamilyKind::Sinh:
        fam.excluded_times = {-b};
        break;
    case FamilyKind::Linear:
        fam.excluded_times = {b};
        break;
    case FamilyKind::Cos: {
        // Zeros of cos((b+t)/L): t = -b + L*pi*(2h+1)/2. Enumerate the ones
        // near the sampling window.
        const double half_pi_L = L * std::numbers::pi / 2.0;
        for (int h = -3; h <= 3; ++h)
            fam.excluded_times.push_back(-b + half_pi_L * (2.0 * h + 1.0));
        std::sort(fam.excluded_times.begin(), fam.excluded_times.end());
        break;
    }
    }
    return fam;
}

ScalarField warping_expression(const GRWFamily& fam) {
    const std::map<std::string, double> consts = {
        {"k", fam.k}, {"L", fam.L}, {"b", fam.b}};
    switch (fam.kind) {
    case FamilyKind::Exp:
        return parse("exp(t/L)/sqrt(k)", kTimeCoord).bind(consts);
    case FamilyKind::Cosh:
        return parse("cosh((b+t)/L)/sqrt(k)", kTimeCoord).bind(consts);
    case FamilyKind::Sinh:
        return parse("sinh((b+t)/L)/sqrt(k)", kTimeCoord).bind(consts);
    case FamilyKind::Cos:
        return parse("cos((b+t)/L)/sqrt(k)", kTimeCoord).bind(consts);
    case FamilyKind::Linear:
        return parse("(b-t)/L", kTimeCoord).bind(consts);
    }
    throw std::logic_error("unreachable family kind");
}

MetricChart family_base_chart(const GRWFamily& fam) {
    const double aL = std::fabs(fam.L);
    std::array<double, 2> bounds{};
    switch (fam.kind) {
    case FamilyKind::Exp:
        bounds = {-1.2 * aL, 1.2 * aL};
        break;
    case FamilyKind::Cosh:
    case FamilyKind::Cos:
        bounds = {-fam.b - 1.2 * aL, -fam.b + 1.2 * aL};
        break;
    case FamilyKind::Sinh:
        bounds = sorted_interval(-fam.b + 0.3 * fam.L, -fam.b + 2.2 * fam.L);
        break;
    case FamilyKind::Linear:
        bounds = sorted_interval(fam.b - 2.2 * fam.L, fam.b - 0.3 * fam.L);
        break;
    }
    DomainHints hints;
    hints.bounds = {bounds};
    for (double tz : fam.excluded_times)
        if (tz > bounds[0] - 1.0 && tz < bounds[1] + 1.0)
            hints.exclusions.push_back({0, tz, kDefaultExclusionRadius});

    std::vector<Expression> comps = {constant_expression(-1.0, kTimeCoord)};
    return MetricChart(kTimeCoord, std::move(comps), {-1}, std::move(hints));
}

BFunction b_function(const ScalarField& f, double t) {
    const double point[1] = {t};
    const Jet2 jet = f.jet2(std::span<const double>(point, 1));
    const double fv = jet.value();
    if (!(fv > 0.0)) throw GeometryError("warping function must be positive");
    const double fp = jet.grad(0);
    const double fpp = jet.hess(0, 0);
    BFunction out;
    out.B = 2.0 * fp / fv;
    out.Bprime = 2.0 * (fpp * fv - fp * fp) / (fv * fv);
    return out;
}

GrwConstants grw_constants(const ScalarField& f, std::size_t n, double t) {
    if (n <= 1) throw GeometryError("fiber dimension must exceed 1");
    const auto [B, Bp] = b_function(f, t);
    const double point[1] = {t};
    const double fv = f.value(std::span<const double>(point, 1));
    const double nn = static_cast<double>(n);
    GrwConstants out;
    out.lambda_bar_bform = -nn * (nn - 1.0) * (B * B + 2.0 * Bp) / 8.0;
    out.ein_fiber_coeff = -(nn - 1.0) * (nn - 2.0) * fv * fv * Bp / 4.0;
    out.lambda_fiber_bform = (nn - 1.0) * (nn - 2.0) * fv * fv * Bp / 4.0;
    return out;
}

FamilyConstants stated_constants(const GRWFamily& fam) {
    const double n = static_cast<double>(fam.n);
    const double L2 = fam.L * fam.L;
    const double bar = n * (n - 1.0) / (2.0 * L2);
    const double fib = (n - 1.0) * (n - 2.0) / (2.0 * fam.k * L2);
    FamilyConstants out;
    switch (fam.kind) {
    case FamilyKind::Exp:
        out.lambda_bar_stated = -bar;
        out.lambda_fiber_stated = 0.0; // fiber must be Ricci flat
        break;
    case FamilyKind::Cosh:
        out.lambda_bar_stated = -bar;
        out.lambda_fiber_stated = -fib;
        break;
    case FamilyKind::Sinh:
        out.lambda_bar_stated = -bar;
        out.lambda_fiber_stated = fib;
        break;
    case FamilyKind::Cos:
        out.lambda_bar_stated = bar;
        out.lambda_fiber_stated = fib;
        break;
    case FamilyKind::Linear:
        out.lambda_bar_stated = 0.0;
        out.lambda_fiber_stated = (n - 1.0) * (n - 2.0) / (2.0 * L2);
        break;
    }
    return out;
}

std::vector<GRWFamily> classify(double lambda_bar, std::size_t n, double L_hint) {
    if (n <= 1) throw GeometryError("classification needs fiber dimension > 1");
    if (!(L_hint > 0.0)) throw GeometryError("L_hint must be positive");
    std::vector<GRWFamily> out;
    if (lambda_bar == 0.0) {
        out.push_back(make_family(FamilyKind::Linear, n, 1.0, L_hint, 0.0));
        return out;
    }
    const double nn = static_cast<double>(n);
    const double L = std::sqrt(nn * (nn - 1.0) / (2.0 * std::fabs(lambda_bar)));
    if (lambda_bar < 0.0) {
        out.push_back(make_family(FamilyKind::Exp, n, 1.0, L, 0.0));
        out.push_back(make_family(FamilyKind::Cosh, n, 1.0, L, 0.0));
        out.push_back(make_family(FamilyKind::Sinh, n, 1.0, L, 0.0));
    } else {
        out.push_back(make_family(FamilyKind::Cos, n, 1.0, L, 0.0));
    }
    return out;
}

WarpedProduct family_chart(const GRWFamily& fam, const MetricChart& fiber) {
    if (fiber.dim() != fam.n)
        throw GeometryError("fiber dimension does not match the family");
    return assemble(family_base_chart(fam), fiber, warping_expression(fam));
}

std::pair<MetricChart, double> standard_fiber(FiberKind kind, std::size_t n, double r) {
    if (n < 2) throw GeometryError("standard fibers need dimension >= 2");
    if (!(r > 0.0)) throw GeometryError("fiber radius must be positive");
    std::vector<std::string> coords;
    coords.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) coords.push_back("y" + std::to_string(i));

    const double nn = static_cast<double>(n);
    const Expression zero = constant_expression(0.0, coords);
    std::vector<Expression> comps(n * n, zero);
    DomainHints hints;

    switch (kind) {
    case FiberKind::Sphere: {
        // Polar chain: g_ii = r^2 * prod_{j<i} sin(y_j)^2.
        for (std::size_t i = 0; i < n; ++i) {
            std::string src = "r^2";
            for (std::size_t j = 0; j < i; ++j) src += "*sin(y" + std::to_string(j + 1) + ")^2";
            comps[i * n + i] = parse(src, coords).bind({{"r", r}});
        }
        const double pi = std::numbers::pi;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            hints.bounds.push_back({0.3, pi - 0.3});
            hints.exclusions.push_back({i, 0.0, kDefaultExclusionRadius});
            hints.exclusions.push_back({i, pi, kDefaultExclusionRadius});
        }
        hints.bounds.push_back({0.0, 6.2}); // azimuthal direction, no poles
        break;
    }
    case FiberKind::Hyperbolic: {
        // Upper-half-space form (r/z)^2 delta with z the last coordinate.
        const std::string z = coords.back();
        for (std::size_t i = 0; i < n; ++i)
            // Note "r^2/..." would parse as r^(2/...): exponents are rationals.
            comps[i * n + i] = parse("(r/" + z + ")^2", coords).bind({{"r", r}});
        for (std::size_t i = 0; i + 1 < n; ++i) hints.bounds.push_back({-1.0, 1.0});
        hints.bounds.push_back({0.6, 1.8});
        hints.exclusions.push_back({n - 1, 0.0, kDefaultExclusionRadius});
        break;
    }
    case FiberKind::Flat: {
        const Expression one = constant_expression(1.0, coords);
        for (std::size_t i = 0; i < n; ++i) comps[i * n + i] = one;
        hints.bounds.assign(n, {-1.0, 1.0});
        break;
    }
    }

    double constant = (nn - 1.0) * (nn - 2.0) / (2.0 * r * r);
    if (kind == FiberKind::Hyperbolic) constant = -constant;
    if (kind == FiberKind::Flat) constant = 0.0;

    MetricChart chart(std::move(coords), std::move(comps), std::vector<int>(n, 1),
                      std::move(hints));
    return {std::move(chart), constant};
}

std::pair<MetricChart, double> matched_fiber(const GRWFamily& fam) {
    const double scale = std::sqrt(fam.k) * std::fabs(fam.L);
    switch (fam.kind) {
    case FamilyKind::Exp:
        return standard_fiber(FiberKind::Flat, fam.n, 1.0);
    case FamilyKind::Cosh:
        return standard_fiber(FiberKind::Sphere, fam.n, scale);
    case FamilyKind::Sinh:
    case FamilyKind::Cos:
        return standard_fiber(FiberKind::Hyperbolic, fam.n, scale);
    case FamilyKind::Linear:
        return standard_fiber(FiberKind::Hyperbolic, fam.n, std::fabs(fam.L));
    }
    throw std::logic_error("unreachable family kind");
}

MetricChart de_sitter_chart(double lambda) {
    if (!(lambda > 0.0)) throw GeometryError("de Sitter chart requires lambda > 0");
    const double a = std::sqrt(lambda / 3.0);
    const std::vector<std::string> coords = {"t", "r", "th", "ph"};
    const std::map<std::string, double> consts = {{"a", a}};
    const Expression zero = constant_expression(0.0, coords);
    std::vector<Expression> comps(16, zero);
    comps[0] = constant_expression(-1.0, coords);
    comps[5] = parse("exp(2*a*t)", coords).bind(consts);
    comps[10] = parse("exp(2*a*t)*r^2", coords).bind(consts);
    comps[15] = parse("exp(2*a*t)*r^2*sin(th)^2", coords).bind(consts);

    const double pi = std::numbers::pi;
    DomainHints hints;
    hints.bounds = {{-0.8, 0.8}, {0.4, 1.6}, {0.3, pi - 0.3}, {0.0, 6.2}};
    hints.exclusions = {{1, 0.0, kDefaultExclusionRadius},
                        {2, 0.0, kDefaultExclusionRadius},
                        {2, pi, kDefaultExclusionRadius}};
    return MetricChart(coords, std::move(comps), {-1, 1, 1, 1}, std::move(hints));
}

std::vector<GRWFamily> default_family_grid() {
    const std::vector<std::size_t> ns = {2, 3, 4};
    const std::vector<double> Ls = {0.5, 1.0, 2.0};
    const std::vector<double> bs = {0.0, 0.7};
    const std::vector<double> ks = {0.5, 1.0};
    std::vector<GRWFamily> grid;
    for (FamilyKind kind : {FamilyKind::Exp, FamilyKind::Cosh, FamilyKind::Sinh,
                            FamilyKind::Cos, FamilyKind::Linear})
        for (std::size_t n : ns)
            for (double L : Ls)
                for (double b : bs) {
                    if (kind == FamilyKind::Linear) {
                        grid.push_back(make_family(kind, n, 1.0, L, b));
                        continue;
                    }
                    for (double k : ks) grid.push_back(make_family(kind, n, k, L, b));
                }
    return grid;
}

} // namespace warpcheck
