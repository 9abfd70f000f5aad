#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "warpcheck/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "warpcheck: curvature and Einstein-equation checks for warped-product metrics"};

    std::string command;
    std::string scenario_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    double tol = 0.0;

    app.add_option("command", command,
                   "one of: curvature | verify | classify | discrepancies")
        ->required()
        ->check(CLI::IsMember({"curvature", "verify", "classify", "discrepancies"}));
    app.add_option("--scenario", scenario_path, "path to the scenario JSON file")
        ->required();
    app.add_option("--out", out_dir, "directory for report artifacts (default: .)");
    auto* seed_opt = app.add_option("--seed", seed, "override the sampling seed");
    auto* samples_opt =
        app.add_option("--samples", samples, "override the sample count")
            ->check(CLI::PositiveNumber);
    auto* tol_opt = app.add_option(
        "--tol", tol, "override the residual and oracle-difference tolerances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        warpcheck::Scenario scenario = warpcheck::load_scenario(scenario_path);
        if (*seed_opt) scenario.seed = seed;
        if (*samples_opt) scenario.sample_count = samples;
        if (*tol_opt) {
            if (tol <= 0) throw warpcheck::ScenarioError("--tol must be > 0");
            scenario.tol_residual = tol;
            scenario.tol_oracle = tol;
        }
        return warpcheck::run_command(command, scenario, out_dir, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
