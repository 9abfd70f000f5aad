#pragma once

#include <string>
#include <utility>
#include <vector>

#include "warpcheck/warped.hpp"

namespace warpcheck {

/// The five exact-solution warping families over the time axis (-dt^2):
/// Exp: e^{t/L}/sqrt(k); Cosh/Sinh/Cos: cosh|sinh|cos((b+t)/L)/sqrt(k);
/// Linear: (b-t)/L.
enum class FamilyKind { Exp, Cosh, Sinh, Cos, Linear };

const char* family_name(FamilyKind kind);
FamilyKind family_from_name(const std::string& name);

struct GRWFamily {
    FamilyKind kind = FamilyKind::Exp;
    std::size_t n = 2; // fiber dimension, > 1
    double k = 1.0;    // positive scale (unused by Linear)
    double L = 1.0;    // nonzero
    double b = 0.0;    // shift
    std::vector<double> excluded_times; // zeros of the warping function
};

/// Constants attached to one family: the classification's stated values and
/// the values measured by the coordinate oracle (filled by the verifier).
struct FamilyConstants {
    double lambda_bar_stated = 0.0;
    double lambda_fiber_stated = 0.0;
    double lambda_bar_oracle = 0.0;
    double lambda_fiber_oracle = 0.0;
};

struct BFunction {
    double B = 0.0;      // 2 f'/f
    double Bprime = 0.0; // d/dt of B
};

/// The three scalars the first-order reduction produces at a time t:
/// lambda_bar_bform   = -n(n-1)(B^2 + 2B')/8
/// ein_fiber_coeff    = -(n-1)(n-2) f^2 B'/4   (fiber Einstein-block coefficient)
/// lambda_fiber_bform = +(n-1)(n-2) f^2 B'/4   (induced fiber constant)
struct GrwConstants {
    double lambda_bar_bform = 0.0;
    double lambda_fiber_bform = 0.0;
    double ein_fiber_coeff = 0.0;
};

/// Validating constructor: n > 1, L != 0, k > 0 (except Linear, which has no
/// scale k). Fills excluded_times with the zeros of the warping function.
GRWFamily make_family(FamilyKind kind, std::size_t n, double k, double L, double b);

/// The family's warping function as an expression over the single coordinate t.
ScalarField warping_expression(const GRWFamily& fam);

/// One-dimensional base chart (-dt^2) with per-family bounds that keep the
/// warping function positive and the product metric nondegenerate.
MetricChart family_base_chart(const GRWFamily& fam);

/// B and B' at time t, both from exact jets. Throws if f(t) <= 0.
BFunction b_function(const ScalarField& f, double t);

/// First-order-reduction constants at time t for fiber dimension n.
GrwConstants grw_constants(const ScalarField& f, std::size_t n, double t);

/// The classification's stated constants for a family (sign conventions of
/// the source classification; the oracle may disagree in sign, which the
/// verifier reports rather than corrects).
FamilyConstants stated_constants(const GRWFamily& fam);

/// Map a cosmological constant to the families that realize it, using the
/// classification's sign convention: negative -> {Exp, Cosh, Sinh}, positive
/// -> {Cos}, zero -> {Linear} (L taken from L_hint). k and b default to 1, 0.
std::vector<GRWFamily> classify(double lambda_bar, std::size_t n, double L_hint);

/// Assemble the family's warped product over a given fiber chart.
WarpedProduct family_chart(const GRWFamily& fam, const MetricChart& fiber);

enum class FiberKind { Sphere, Hyperbolic, Flat };

const char* fiber_kind_name(FiberKind kind);
FiberKind fiber_kind_from_name(const std::string& name);

/// Standard Einstein fibers with their Einstein constants (G = -Lambda h):
/// round n-sphere of radius r -> +(n-1)(n-2)/(2r^2); hyperbolic space of
/// curvature radius r -> -(n-1)(n-2)/(2r^2); flat -> 0. Requires n >= 2.
std::pair<MetricChart, double> standard_fiber(FiberKind kind, std::size_t n, double r);

/// The fiber geometry whose Ricci curvature matches what the family's base
/// and warping force on the fiber (Exp -> flat; Cosh -> sphere(sqrt(k)|L|);
/// Sinh/Cos -> hyperbolic(sqrt(k)|L|); Linear -> hyperbolic(|L|)).
std::pair<MetricChart, double> matched_fiber(const GRWFamily& fam);

/// Exponentially expanding 4D chart (t, r, th, ph) with scale factor
/// e^{sqrt(Lambda/3) t} over a flat spatial slice in spherical coordinates.
/// Requires Lambda > 0.
MetricChart de_sitter_chart(double lambda);

/// The acceptance parameter grid: every family kind with n in {2,3,4},
/// L in {0.5,1,2}, b in {0,0.7}, and k in {0.5,1} (k fixed to 1 for Linear).
std::vector<GRWFamily> default_family_grid();

} // namespace warpcheck
