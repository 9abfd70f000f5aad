#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "warpcheck/fuzz.hpp"
#include "warpcheck/grw.hpp"
#include "warpcheck/verify.hpp"
#include "warpcheck/warped.hpp"

using namespace warpcheck;

namespace {

MetricChart flat_base() {
    const std::vector<std::string> coords{"x", "y"};
    std::vector<Expression> comps{
        constant_expression(1.0, coords), constant_expression(0.0, coords),
        constant_expression(0.0, coords), constant_expression(1.0, coords)};
    return MetricChart(coords, std::move(comps), {1, 1}, DomainHints{});
}

MetricChart interval_base() {
    const std::vector<std::string> coords{"t"};
    std::vector<Expression> comps{constant_expression(-1.0, coords)};
    return MetricChart(coords, std::move(comps), {-1}, DomainHints{});
}

MetricChart circle_fiber() {
    const std::vector<std::string> coords{"ph"};
    std::vector<Expression> comps{constant_expression(1.0, coords)};
    DomainHints hints;
    hints.bounds = {{0.0, 6.2}};
    return MetricChart(coords, std::move(comps), {1}, std::move(hints));
}

} // namespace

TEST_CASE("direct product (f = 1): blocks add, mixed terms vanish") {
    const MetricChart base = flat_base();
    const auto [fiber, fc] = standard_fiber(FiberKind::Sphere, 2, 1.0);
    const WarpedProduct w = assemble(base, fiber, constant_expression(1.0, base.coords()));
    CHECK(w.product.dim() == 4);

    const SamplePlan plan = plan_for_chart(w.product, 50, 2);
    CHECK(oracle_diff(w, plan) < 1e-9);

    for (const auto& p : sample_points(plan)) {
        const WarpedCurvature cf = closed_form_curvature(w, p);
        for (double v : cf.ric_mixed) CHECK(v == 0.0);
        for (double v : cf.ein_mixed) CHECK(v == 0.0);
        // product metric: fiber block is f^2 h = h, mixed entries are zero
        const Matrix g = w.product.metric(p);
        const Matrix h = fiber.metric(std::vector<double>{p[2], p[3]});
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
                CHECK(g(2 + a, 2 + b) == doctest::Approx(h(a, b)).epsilon(1e-15));
                CHECK(g(a, 2 + b) == 0.0);
            }
    }
}

TEST_CASE("round sphere as a warped product of an arc and a circle") {
    // dth^2 + sin(th)^2 dph^2 on (0, pi) x S^1
    const std::vector<std::string> coords{"th"};
    std::vector<Expression> comps{constant_expression(1.0, coords)};
    DomainHints hints;
    hints.bounds = {{0.4, 2.7}};
    const MetricChart base(coords, std::move(comps), {1}, std::move(hints));
    const WarpedProduct w = assemble(base, circle_fiber(), parse("sin(th)", coords));

    const SamplePlan plan = plan_for_chart(w.product, 60, 4);
    CHECK(oracle_diff(w, plan) < 1e-9);
    for (const auto& p : sample_points(plan)) {
        const WarpedCurvature cf = closed_form_curvature(w, p);
        CHECK(cf.scalar == doctest::Approx(2.0).epsilon(1e-12));
        const CurvatureBundle b = curvature_bundle(w.product, p);
        CHECK(b.scalar == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("product of unit spheres is an exact solution with lambda 1") {
    const auto [s2a, ca] = standard_fiber(FiberKind::Sphere, 2, 1.0);
    // second sphere needs distinct coordinate names
    const std::vector<std::string> coords{"z1", "z2"};
    std::vector<Expression> comps{
        constant_expression(1.0, coords), constant_expression(0.0, coords),
        constant_expression(0.0, coords), parse("sin(z1)^2", coords)};
    DomainHints hints;
    hints.bounds = {{0.3, 2.8}, {0.0, 6.2}};
    const MetricChart s2b(coords, std::move(comps), {1, 1}, std::move(hints));

    const WarpedProduct w = assemble(s2a, s2b, constant_expression(1.0, s2a.coords()));
    const SamplePlan base_plan = plan_for_chart(w.base, 40, 6);
    for (const auto& p : sample_points(base_plan))
        CHECK(lambda_bar(w, p) == doctest::Approx(1.0).epsilon(1e-12));

    const SamplePlan plan = plan_for_chart(w.product, 60, 6);
    const VerificationReport rep = einstein_residual(w.product, 1.0, plan);
    CHECK(rep.pass);
    CHECK(rep.max_rel_residual < 1e-9);
}

TEST_CASE("mismatched fiber radius breaks the Einstein property measurably") {
    const auto [s2a, ca] = standard_fiber(FiberKind::Sphere, 2, 1.0);
    const std::vector<std::string> coords{"z1", "z2"};
    std::vector<Expression> comps{
        constant_expression(4.0, coords), constant_expression(0.0, coords),
        constant_expression(0.0, coords), parse("4*sin(z1)^2", coords)};
    DomainHints hints;
    hints.bounds = {{0.3, 2.8}, {0.0, 6.2}};
    const MetricChart s2b(coords, std::move(comps), {1, 1}, std::move(hints));

    const WarpedProduct w = assemble(s2a, s2b, constant_expression(1.0, s2a.coords()));
    const SamplePlan plan = plan_for_chart(w.product, 60, 6);
    const double fitted = oracle_lambda(w.product, plan);
    const VerificationReport rep = einstein_residual(w.product, fitted, plan);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_rel_residual > 0.05);
}

TEST_CASE("constant warping factor leaves factor Ricci tensors unchanged") {
    const auto [base, cb] = standard_fiber(FiberKind::Sphere, 2, 1.0);
    const std::vector<std::string> coords{"z1", "z2"};
    std::vector<Expression> comps{
        constant_expression(1.0, coords), constant_expression(0.0, coords),
        constant_expression(0.0, coords), parse("sin(z1)^2", coords)};
    DomainHints hints;
    hints.bounds = {{0.3, 2.8}, {0.0, 6.2}};
    const MetricChart fiber(coords, std::move(comps), {1, 1}, std::move(hints));

    const WarpedProduct w = assemble(base, fiber, constant_expression(2.0, base.coords()));
    const SamplePlan plan = plan_for_chart(w.product, 30, 8);
    CHECK(oracle_diff(w, plan) < 1e-9);
    for (const auto& p : sample_points(plan)) {
        const WarpedCurvature cf = closed_form_curvature(w, p);
        const std::vector<double> fp{p[2], p[3]};
        const CurvatureBundle fb = curvature_bundle(fiber, fp);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b)
                CHECK(cf.ric_fiber(a, b) == doctest::Approx(fb.ricci(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("assembly rejects coordinate collisions and nonpositive warping") {
    const MetricChart base = interval_base();
    const std::vector<std::string> tname{"t"};
    std::vector<Expression> comps{constant_expression(1.0, tname)};
    const MetricChart clash(tname, std::move(comps), {1}, DomainHints{});
    CHECK_THROWS_AS(assemble(base, clash, constant_expression(1.0, base.coords())),
                    GeometryError);

    const auto [fiber, fc] = standard_fiber(FiberKind::Flat, 2, 1.0);
    CHECK_THROWS_AS(assemble(base, fiber, parse("t", base.coords())), GeometryError);

    // warping must be expressed over the base coordinates
    CHECK_THROWS_AS(assemble(base, fiber, parse("y1", fiber.coords())), GeometryError);
}

TEST_CASE("induced cosmological constant on an exponential family chart") {
    const GRWFamily fam = make_family(FamilyKind::Exp, 3, 1.0, 1.0, 0.0);
    const auto [fiber, fc] = matched_fiber(fam);
    const WarpedProduct w = family_chart(fam, fiber);
    const SamplePlan base_plan = plan_for_chart(w.base, 50, 12);
    for (const auto& p : sample_points(base_plan)) {
        CHECK(lambda_bar(w, p) == doctest::Approx(3.0).epsilon(1e-11));
        const EigenvalueCheck eig = eigenvalue_check(w, 3.0, p);
        CHECK(std::fabs(eig.residual_derived) < 1e-11);
        // opposite-sign eigenvalue misses by -2 f(t)
        const double f = w.f.value(p);
        CHECK(eig.residual_stated == doctest::Approx(-2.0 * f).epsilon(1e-10));
    }
}

TEST_CASE("fiber condition reports the Ricci coefficient and fiber constant") {
    const GRWFamily fam = make_family(FamilyKind::Cosh, 3, 1.0, 1.0, 0.0);
    const auto [fiber, fc] = matched_fiber(fam);
    const WarpedProduct w = family_chart(fam, fiber);
    const SamplePlan base_plan = plan_for_chart(w.base, 50, 13);
    for (const auto& p : sample_points(base_plan)) {
        const FiberCondition cond = fiber_einstein_condition(w, p);
        CHECK(cond.ric_coeff == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(cond.lambda_fiber == doctest::Approx(1.0).epsilon(1e-10));
    }
    // the matched sphere fiber really has Ric = 2 h
    const SamplePlan fiber_plan = plan_for_chart(fiber, 20, 13);
    for (const auto& p : sample_points(fiber_plan)) {
        const CurvatureBundle b = curvature_bundle(fiber, p);
        const Matrix h = fiber.metric(p);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t bidx = 0; bidx < 3; ++bidx)
                CHECK(b.ricci(a, bidx) ==
                      doctest::Approx(2.0 * h(a, bidx)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("nonconstant warping on a flat base is detected as non-Einstein") {
    const MetricChart base = flat_base();
    const auto [fiber, fc] = standard_fiber(FiberKind::Sphere, 2, 1.0);

    const WarpedProduct bad = assemble(base, fiber, parse("1+0.3*sin(x)", base.coords()));
    const SamplePlan base_plan = plan_for_chart(bad.base, 100, 21);
    std::vector<double> lam;
    for (const auto& p : sample_points(base_plan)) lam.push_back(lambda_bar(bad, p));
    CHECK_FALSE(constancy(lam).is_constant);

    const WarpedProduct good =
        assemble(base, fiber, constant_expression(1.1, base.coords()));
    lam.clear();
    for (const auto& p : sample_points(base_plan)) lam.push_back(lambda_bar(good, p));
    CHECK(constancy(lam).is_constant);
}

TEST_CASE("small-dimension guards") {
    // 1 + 1 dimensional products have no meaningful constant: m + n must exceed 2
    const MetricChart base = interval_base();
    const WarpedProduct w =
        assemble(base, circle_fiber(), parse("2+sin(t)", base.coords()));
    CHECK_THROWS_AS(lambda_bar(w, std::vector<double>{0.1}), GeometryError);
    CHECK_THROWS_AS(eigenvalue_check(w, 1.0, std::vector<double>{0.1}), GeometryError);
}

TEST_CASE("closed form matches brute force on fuzzed products") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const WarpedProduct w = fuzzed_warped_product(seed);
        const SamplePlan plan = plan_for_chart(w.product, 40, seed);
        CHECK(oracle_diff(w, plan) < 1e-9);
    }
}
