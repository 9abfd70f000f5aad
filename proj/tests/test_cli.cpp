#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef WARPCHECK_BIN
#error "WARPCHECK_BIN must point at the CLI binary"
#endif

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("warpcheck_cli_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& file, const std::string& text) {
    std::ofstream out(file);
    REQUIRE(out.good());
    out << text;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the CLI with `args`, captures stdout into `stdout_file`, returns the
// exit code.
int run_cli(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd =
        std::string(WARPCHECK_BIN) + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return (status >> 8) & 0xFF;
}

const char* kExpScenario = R"({
  "version": 1,
  "warping": {"family": {"name": "exp", "n": 3, "L": 1.0}},
  "sampling": {"count": 40}
})";

} // namespace

TEST_CASE("verify passes on an exponential family and is byte-deterministic") {
    TempDir tmp("verify");
    write_text(tmp / "s.json", kExpScenario);

    const std::string base = "verify --scenario " + (tmp / "s.json").string();
    const int code1 = run_cli(base + " --out " + (tmp / "a").string(), tmp / "out1.txt");
    const int code2 = run_cli(base + " --out " + (tmp / "b").string(), tmp / "out2.txt");
    CHECK(code1 == 0);
    CHECK(code2 == 0);
    CHECK(slurp(tmp / "out1.txt").find("PASS") != std::string::npos);

    for (const char* name : {"report.json", "residuals.csv"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(tmp / "a" / name));
        CHECK(slurp(tmp / "a" / name) == slurp(tmp / "b" / name));
    }
    CHECK(slurp(tmp / "out1.txt") == slurp(tmp / "out2.txt"));
}

TEST_CASE("verify fails with exit 1 when the fiber does not match the family") {
    TempDir tmp("mismatch");
    write_text(tmp / "s.json", R"({
      "version": 1,
      "fiber": "flat",
      "warping": {"family": {"name": "cosh", "n": 3, "L": 1.0}},
      "sampling": {"count": 40}
    })");
    const int code = run_cli("verify --scenario " + (tmp / "s.json").string() + " --out " +
                                 (tmp / "out").string(),
                             tmp / "stdout.txt");
    CHECK(code == 1);
    CHECK(slurp(tmp / "stdout.txt").find("FAIL") != std::string::npos);
}

TEST_CASE("configuration and parse problems exit with code 2") {
    TempDir tmp("errors");
    const std::vector<std::pair<std::string, std::string>> bad = {
        {"unknown_key.json", R"({"version": 1, "warpin": {}})"},
        {"bad_json.json", R"({"version": 1)"},
        {"bad_version.json", R"({"version": 3})"},
        {"empty_warping.json", R"({"version": 1, "warping": {}})"},
        {"bad_family.json", R"({"version": 1, "warping": {"family": {"name": "spiral"}}})"},
        {"bad_expr.json", R"({
          "version": 1,
          "base": "interval",
          "fiber": {"builtin": "flat", "dim": 2},
          "warping": {"expr": "sin(t"}
        })"},
    };
    for (const auto& [name, text] : bad) {
        CAPTURE(name);
        write_text(tmp / name, text);
        CHECK(run_cli("verify --scenario " + (tmp / name).string() + " --out " +
                          (tmp / "out").string(),
                      tmp / "stdout.txt") == 2);
    }

    // missing scenario file
    CHECK(run_cli("verify --scenario " + (tmp / "nope.json").string(), tmp / "stdout.txt") ==
          2);
    // unknown command and missing required flag are CLI parse errors
    write_text(tmp / "ok.json", kExpScenario);
    CHECK(run_cli("summon --scenario " + (tmp / "ok.json").string(), tmp / "stdout.txt") == 2);
    CHECK(run_cli("verify", tmp / "stdout.txt") == 2);
    // nonpositive tolerance override
    CHECK(run_cli("verify --scenario " + (tmp / "ok.json").string() + " --tol 0",
                  tmp / "stdout.txt") == 2);
}

TEST_CASE("--help exits 0") {
    TempDir tmp("help");
    CHECK(run_cli("--help", tmp / "stdout.txt") == 0);
    CHECK(slurp(tmp / "stdout.txt").find("--scenario") != std::string::npos);
}

TEST_CASE("classify writes families.json") {
    TempDir tmp("classify");
    write_text(tmp / "s.json", R"({
      "version": 1,
      "classify": {"lambda_bar": -3.0, "n": 3, "L_hint": 1.0},
      "sampling": {"count": 25}
    })");
    const int code = run_cli("classify --scenario " + (tmp / "s.json").string() + " --out " +
                                 (tmp / "out").string(),
                             tmp / "stdout.txt");
    CHECK(code == 0);
    REQUIRE(fs::exists(tmp / "out" / "families.json"));
    REQUIRE(fs::exists(tmp / "out" / "report.json"));
    const std::string families = slurp(tmp / "out" / "families.json");
    CHECK(families.find("\"kind\"") != std::string::npos);
    CHECK(families.find("\"lambda_bar_oracle\"") != std::string::npos);
}

TEST_CASE("curvature prints the report document to stdout") {
    TempDir tmp("curvature");
    write_text(tmp / "s.json", R"({
      "version": 1,
      "chart": {"builtin": "sphere", "dim": 2, "radius": 1.0},
      "points": [[1.0471975511965976, 0.5]]
    })");
    const int code = run_cli("curvature --scenario " + (tmp / "s.json").string() + " --out " +
                                 (tmp / "out").string(),
                             tmp / "stdout.txt");
    CHECK(code == 0);
    const std::string out = slurp(tmp / "stdout.txt");
    CHECK(out.rfind("{\"command\":\"curvature\"", 0) == 0);
    const nlohmann::json doc = nlohmann::json::parse(out);
    REQUIRE(doc["points"].size() == 1);
    // unit 2-sphere scalar curvature is 2
    CHECK(doc["points"][0]["scalar"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(slurp(tmp / "out" / "report.json") == out);
}

TEST_CASE("--seed and --samples override the sampling plan") {
    TempDir tmp("overrides");
    write_text(tmp / "s.json", kExpScenario);
    const std::string base = "verify --scenario " + (tmp / "s.json").string();

    CHECK(run_cli(base + " --out " + (tmp / "s10").string() + " --samples 10",
                  tmp / "o.txt") == 0);
    std::istringstream csv(slurp(tmp / "s10" / "residuals.csv"));
    std::size_t lines = 0;
    for (std::string line; std::getline(csv, line);) ++lines;
    CHECK(lines == 11); // header + one row per sample

    CHECK(run_cli(base + " --out " + (tmp / "seed7").string() + " --seed 7", tmp / "o.txt") ==
          0);
    CHECK(run_cli(base + " --out " + (tmp / "seed8").string() + " --seed 8", tmp / "o.txt") ==
          0);
    CHECK(slurp(tmp / "seed7" / "residuals.csv") != slurp(tmp / "seed8" / "residuals.csv"));
}
