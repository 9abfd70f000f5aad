#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "warpcheck/grw.hpp"
#include "warpcheck/verify.hpp"

namespace warpcheck {

/// Where the cosmological constant used by `verify` comes from: the
/// classification's stated value for the configured family, the coordinate
/// oracle's least-squares estimate, or an explicit number from the config.
enum class LambdaPolicy { Stated, Oracle, Explicit };

/// A fully resolved run configuration. Exactly one geometry mode is active:
/// a standalone chart (`chart`), or an assembled warped product (`warped`,
/// with `family` set when the warping came from a named family). Commands
/// that need no geometry (classify, default discrepancies) accept neither.
struct Scenario {
    int version = 1;

    std::optional<MetricChart> chart;
    std::optional<WarpedProduct> warped;
    std::optional<GRWFamily> family;

    // Einstein constant of a builtin/matched fiber, when one was used.
    bool has_fiber_constant = false;
    double fiber_constant = 0.0;

    LambdaPolicy policy = LambdaPolicy::Oracle;
    double lambda_explicit = 0.0;

    std::size_t sample_count = 100;
    std::uint64_t seed = kDefaultSeed;
    double tol_residual = 1e-6;
    double tol_oracle = 1e-6;

    // Explicit evaluation points for the curvature command.
    std::vector<std::vector<double>> points;

    bool has_classify = false;
    double classify_lambda = 0.0;
    std::size_t classify_n = 0;
    double classify_L_hint = 1.0;
};

/// Parse a JSON scenario document. The schema is strict: a top-level
/// "version": 1 is required and unknown keys anywhere are rejected, so a
/// typo in a physics parameter fails loudly instead of silently using a
/// default. Throws ScenarioError (schema), ParseError (expression text), or
/// GeometryError (inconsistent geometry).
Scenario parse_scenario(const std::string& json_text);

/// Convenience: read the file and parse it. Throws ScenarioError when the
/// file cannot be read.
Scenario load_scenario(const std::string& path);

/// Execute one command against a scenario. Artifacts go under `out_dir`
/// (created if needed): every command writes report.json, verify adds
/// residuals.csv, classify adds families.json. Human-readable summary lines
/// go to `out`. Returns the process exit code: 0 success / verification
/// pass, 1 verification failure. Config problems are reported by throwing
/// (the caller maps them to exit code 2).
int run_command(const std::string& command, const Scenario& scenario,
                const std::string& out_dir, std::ostream& out);

} // namespace warpcheck
