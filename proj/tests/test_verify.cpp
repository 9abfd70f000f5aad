#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "warpcheck/fuzz.hpp"
#include "warpcheck/grw.hpp"
#include "warpcheck/verify.hpp"

using namespace warpcheck;

namespace {
MetricChart minkowski2() {
    const std::vector<std::string> coords{"t", "x"};
    std::vector<Expression> comps{
        constant_expression(-1.0, coords), constant_expression(0.0, coords),
        constant_expression(0.0, coords), constant_expression(1.0, coords)};
    return MetricChart(coords, std::move(comps), {-1, 1}, DomainHints{});
}
} // namespace

TEST_CASE("constancy statistics") {
    CHECK_THROWS_AS(constancy({}), std::invalid_argument);

    const ConstancyStats flat = constancy({5.0, 5.0, 5.0});
    CHECK(flat.mean == 5.0);
    CHECK(flat.std == 0.0);
    CHECK(flat.is_constant);

    const ConstancyStats wide = constancy({1.0, 2.0});
    CHECK(wide.mean == doctest::Approx(1.5));
    CHECK(wide.std == doctest::Approx(0.5));
    CHECK_FALSE(wide.is_constant);

    // the spread threshold is relative to max(1, |mean|)
    CHECK(constancy({1e9, 1e9 * (1.0 + 5e-9)}).is_constant);
    CHECK_FALSE(constancy({1e-9, 3e-8}).is_constant);
}

TEST_CASE("sampling is deterministic and respects the plan") {
    const MetricChart chart = minkowski2();
    const SamplePlan plan = plan_for_chart(chart, 37, 123);
    CHECK(plan.count == 37);
    CHECK(plan.seed == 123);
    const auto a = sample_points(plan);
    const auto b = sample_points(plan);
    REQUIRE(a.size() == 37);
    CHECK(a == b);
    for (const auto& p : a) {
        REQUIRE(p.size() == 2);
        for (double x : p) {
            CHECK(x >= -1.0);
            CHECK(x <= 1.0);
        }
    }
    const SamplePlan other = plan_for_chart(chart, 37, 124);
    CHECK(sample_points(other) != a);
}

TEST_CASE("flat spacetime: residual is exactly zero at lambda 0") {
    const MetricChart chart = minkowski2();
    const SamplePlan plan = plan_for_chart(chart, 50, 7);
    const VerificationReport rep = einstein_residual(chart, 0.0, plan);
    CHECK(rep.pass);
    CHECK(rep.max_abs_residual == 0.0);
    CHECK(rep.max_rel_residual == 0.0);
    CHECK(rep.rows.size() == 50);

    // a wrong constant shows up as |lambda| * |g| in the residual
    const VerificationReport bad = einstein_residual(chart, 0.5, plan);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_abs_residual == doctest::Approx(0.5));
}

TEST_CASE("pointwise least-squares constant recovers exact solutions") {
    const MetricChart ds = de_sitter_chart(3.0);
    const SamplePlan plan = plan_for_chart(ds, 40, 9);
    for (const auto& p : sample_points(plan))
        CHECK(pointwise_lambda(ds, p) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(oracle_lambda(ds, plan) == doctest::Approx(3.0).epsilon(1e-10));

    const auto [sphere, constant] = standard_fiber(FiberKind::Sphere, 3, 2.0);
    const SamplePlan splan = plan_for_chart(sphere, 40, 9);
    CHECK(oracle_lambda(sphere, splan) == doctest::Approx(0.25).epsilon(1e-10));

    // flat space fits lambda = 0
    const SamplePlan mplan = plan_for_chart(minkowski2(), 10, 9);
    CHECK(oracle_lambda(minkowski2(), mplan) == 0.0);
}

TEST_CASE("residual scale: opposite-sign constant fails by a wide margin") {
    const GRWFamily fam = make_family(FamilyKind::Exp, 3, 1.0, 1.0, 0.0);
    const auto [fiber, fc] = matched_fiber(fam);
    const WarpedProduct w = family_chart(fam, fiber);
    const SamplePlan plan = plan_for_chart(w.product, 60, 3);

    const VerificationReport right = einstein_residual(w.product, 3.0, plan);
    CHECK(right.pass);
    CHECK(right.max_rel_residual < 1e-9);

    const VerificationReport wrong = einstein_residual(w.product, -3.0, plan);
    CHECK_FALSE(wrong.pass);
    CHECK(wrong.max_rel_residual > 1.0);
}

TEST_CASE("closed-form/brute-force agreement on family and fuzzed charts") {
    const GRWFamily fam = make_family(FamilyKind::Sinh, 2, 0.5, 2.0, 0.7);
    const auto [fiber, fc] = matched_fiber(fam);
    const WarpedProduct w = family_chart(fam, fiber);
    CHECK(oracle_diff(w, plan_for_chart(w.product, 50, 5)) < 1e-9);

    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL, 14ULL, 15ULL}) {
        const WarpedProduct fz = fuzzed_warped_product(seed);
        CAPTURE(seed);
        CHECK(oracle_diff(fz, plan_for_chart(fz.product, 40, seed)) < 1e-9);
    }
}

TEST_CASE("fuzzed products are reproducible and amplitude-controlled") {
    const WarpedProduct a = fuzzed_warped_product(77);
    const WarpedProduct b = fuzzed_warped_product(77);
    CHECK(a.f.str() == b.f.str());
    CHECK(a.base.component(0, 1).str() == b.base.component(0, 1).str());

    // amplitude 0 collapses the base to the identity metric and f to 1
    const WarpedProduct flat = fuzzed_warped_product(77, 0.0);
    const std::vector<double> p{0.3, -0.4};
    CHECK(flat.base.metric(p)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(flat.base.metric(p)(0, 1) == doctest::Approx(0.0));
    CHECK(flat.f.value(p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sign agreement classification") {
    CHECK(sign_agreement(1.0, 2.0) == "agrees");
    CHECK(sign_agreement(-0.5, -3.0) == "agrees");
    CHECK(sign_agreement(-1.0, 1.0) == "disagrees");
    CHECK(sign_agreement(1.0, -1e-3) == "disagrees");
    CHECK(sign_agreement(0.0, 0.0) == "not_applicable");
    CHECK(sign_agreement(1e-10, -1e-12) == "not_applicable"); // both in the zero band
    CHECK(sign_agreement(1e-10, 1.0) == "disagrees");         // zero vs nonzero
}
