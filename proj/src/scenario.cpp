#include "warpcheck/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "warpcheck/errors.hpp"
#include "warpcheck/jsonio.hpp"

namespace warpcheck {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// strict-schema helpers

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                known = true;
                break;
            }
        if (!known) throw ScenarioError("unknown key '" + it.key() + "' in " + where);
    }
}

const json& require_object(const json& v, const std::string& where) {
    if (!v.is_object()) throw ScenarioError(where + " must be an object");
    return v;
}

double get_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ScenarioError(where + " must be a number");
    return v.get<double>();
}

std::string get_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw ScenarioError(where + " must be a string");
    return v.get<std::string>();
}

std::size_t get_count(const json& v, const std::string& where, std::size_t min_value) {
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min_value))
        throw ScenarioError(where + " must be an integer >= " + std::to_string(min_value));
    return static_cast<std::size_t>(v.get<long long>());
}

std::uint64_t get_seed(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
        return static_cast<std::uint64_t>(v.get<long long>());
    throw ScenarioError(where + " must be a nonnegative integer");
}

std::map<std::string, double> get_constants(const json& v, const std::string& where) {
    require_object(v, where);
    std::map<std::string, double> out;
    for (auto it = v.begin(); it != v.end(); ++it)
        out[it.key()] = get_number(it.value(), where + "." + it.key());
    return out;
}

Expression parse_field(const std::string& source, const std::vector<std::string>& coords,
                       const std::map<std::string, double>& constants,
                       const std::string& where) {
    Expression e = parse(source, coords);
    if (!constants.empty()) e = e.bind(constants);
    const std::vector<std::string> loose = e.unbound_symbols();
    if (!loose.empty()) {
        std::string names;
        for (const std::string& s : loose) names += (names.empty() ? "" : ", ") + s;
        throw ScenarioError(where + " has unbound symbols: " + names);
    }
    return e;
}

// ---------------------------------------------------------------------------
// chart specs

struct ParsedChart {
    MetricChart chart;
    bool has_constant = false; // Einstein constant known for builtin fibers
    double constant = 0.0;
};

MetricChart make_minkowski(std::size_t dim) {
    std::vector<std::string> coords{"t"};
    for (std::size_t i = 1; i < dim; ++i) coords.push_back("x" + std::to_string(i));
    std::vector<Expression> comps;
    std::vector<int> signature;
    for (std::size_t i = 0; i < dim; ++i) {
        signature.push_back(i == 0 ? -1 : 1);
        for (std::size_t j = 0; j < dim; ++j) {
            const double v = (i != j) ? 0.0 : (i == 0 ? -1.0 : 1.0);
            comps.push_back(constant_expression(v, coords));
        }
    }
    return MetricChart(std::move(coords), std::move(comps), std::move(signature),
                       DomainHints{});
}

MetricChart make_interval() {
    const std::vector<std::string> coords{"t"};
    std::vector<Expression> comps{constant_expression(-1.0, coords)};
    return MetricChart(coords, std::move(comps), {-1}, DomainHints{});
}

ParsedChart builtin_chart(const std::string& name, const json* params,
                          const std::string& where, std::size_t fiber_dim) {
    auto num = [&](const char* key, double fallback) {
        if (params && params->contains(key))
            return get_number((*params)[key], where + "." + key);
        return fallback;
    };
    auto dim = [&](std::size_t fallback) {
        if (params && params->contains("dim"))
            return get_count((*params)["dim"], where + ".dim", 1);
        return fallback;
    };

    if (name == "minkowski") {
        if (params) check_keys(*params, where, {"builtin", "dim"});
        return {make_minkowski(dim(4)), false, 0.0};
    }
    if (name == "interval") {
        if (params) check_keys(*params, where, {"builtin"});
        return {make_interval(), false, 0.0};
    }
    if (name == "de_sitter") {
        if (params) check_keys(*params, where, {"builtin", "lambda"});
        return {de_sitter_chart(num("lambda", 3.0)), false, 0.0};
    }
    if (name == "sphere" || name == "hyperbolic" || name == "flat") {
        if (params) check_keys(*params, where, {"builtin", "dim", "radius"});
        const FiberKind kind = name == "sphere"      ? FiberKind::Sphere
                               : name == "hyperbolic" ? FiberKind::Hyperbolic
                                                      : FiberKind::Flat;
        auto [chart, constant] = standard_fiber(kind, dim(fiber_dim), num("radius", 1.0));
        return {std::move(chart), true, constant};
    }
    throw ScenarioError("unknown builtin chart '" + name + "' in " + where);
}

MetricChart custom_chart(const json& c, const std::string& where) {
    require_object(c, where);
    check_keys(c, where,
               {"coords", "components", "signature", "bounds", "exclusions", "constants"});
    if (!c.contains("coords") || !c.contains("components") || !c.contains("signature"))
        throw ScenarioError(where + " requires coords, components, and signature");

    std::vector<std::string> coords;
    if (!c["coords"].is_array()) throw ScenarioError(where + ".coords must be an array");
    for (const json& v : c["coords"]) coords.push_back(get_string(v, where + ".coords[]"));
    const std::size_t dim = coords.size();
    if (dim == 0) throw ScenarioError(where + ".coords must not be empty");

    std::map<std::string, double> constants;
    if (c.contains("constants")) constants = get_constants(c["constants"], where + ".constants");

    const json& rows = c["components"];
    if (!rows.is_array() || rows.size() != dim)
        throw ScenarioError(where + ".components must be a " + std::to_string(dim) + "x" +
                            std::to_string(dim) + " array of expression strings");
    std::vector<Expression> comps;
    for (const json& row : rows) {
        if (!row.is_array() || row.size() != dim)
            throw ScenarioError(where + ".components rows must have " + std::to_string(dim) +
                                " entries");
        for (const json& cell : row)
            comps.push_back(parse_field(get_string(cell, where + ".components[]"), coords,
                                        constants, where + ".components"));
    }

    std::vector<int> signature;
    if (!c["signature"].is_array()) throw ScenarioError(where + ".signature must be an array");
    for (const json& v : c["signature"]) {
        if (!v.is_number_integer())
            throw ScenarioError(where + ".signature entries must be integers");
        signature.push_back(static_cast<int>(v.get<long long>()));
    }

    DomainHints hints;
    if (c.contains("bounds")) {
        const json& bs = c["bounds"];
        if (!bs.is_array()) throw ScenarioError(where + ".bounds must be an array");
        for (const json& b : bs) {
            if (!b.is_array() || b.size() != 2)
                throw ScenarioError(where + ".bounds entries must be [lo, hi] pairs");
            hints.bounds.push_back({get_number(b[0], where + ".bounds[]"),
                                    get_number(b[1], where + ".bounds[]")});
        }
    }
    if (c.contains("exclusions")) {
        const json& xs = c["exclusions"];
        if (!xs.is_array()) throw ScenarioError(where + ".exclusions must be an array");
        for (const json& x : xs) {
            require_object(x, where + ".exclusions[]");
            check_keys(x, where + ".exclusions[]", {"coord", "center", "radius"});
            if (!x.contains("coord") || !x.contains("center"))
                throw ScenarioError(where + ".exclusions entries need coord and center");
            const std::string cname = get_string(x["coord"], where + ".exclusions[].coord");
            const auto it = std::find(coords.begin(), coords.end(), cname);
            if (it == coords.end())
                throw ScenarioError(where + ".exclusions names unknown coordinate '" + cname +
                                    "'");
            Exclusion ex;
            ex.coord = static_cast<std::size_t>(it - coords.begin());
            ex.center = get_number(x["center"], where + ".exclusions[].center");
            ex.radius = x.contains("radius")
                            ? get_number(x["radius"], where + ".exclusions[].radius")
                            : kDefaultExclusionRadius;
            hints.exclusions.push_back(ex);
        }
    }

    return MetricChart(std::move(coords), std::move(comps), std::move(signature),
                       std::move(hints));
}

// `fiber_dim` is the dimension used for the standard-fiber builtins when the
// entry does not give one (the family's n when a family warping is present,
// otherwise 2).
ParsedChart parse_chart_entry(const json& entry, const std::string& where,
                              std::size_t fiber_dim = 2) {
    if (entry.is_string())
        return builtin_chart(entry.get<std::string>(), nullptr, where, fiber_dim);
    if (entry.is_object()) {
        check_keys(entry, where, {"builtin", "custom", "dim", "radius", "lambda"});
        const bool has_builtin = entry.contains("builtin");
        const bool has_custom = entry.contains("custom");
        if (has_builtin == has_custom)
            throw ScenarioError(where + " must give exactly one of \"builtin\" or \"custom\"");
        if (has_custom) {
            check_keys(entry, where, {"custom"});
            return {custom_chart(entry["custom"], where + ".custom"), false, 0.0};
        }
        return builtin_chart(get_string(entry["builtin"], where + ".builtin"), &entry, where,
                             fiber_dim);
    }
    throw ScenarioError(where + " must be a builtin name or an object");
}

// ---------------------------------------------------------------------------
// report plumbing

std::string artifact_path(const std::string& out_dir, const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
}

void write_matrix(JsonWriter& w, const Matrix& m) {
    w.begin_array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        w.begin_array();
        for (std::size_t j = 0; j < m.dim(); ++j) w.value(m(i, j));
        w.end_array();
    }
    w.end_array();
}

void write_stats(JsonWriter& w, const ConstancyStats& s) {
    w.begin_object();
    w.key("mean").value(s.mean);
    w.key("std").value(s.std);
    w.key("is_constant").value(s.is_constant);
    w.end_object();
}

std::string fmt(double v) { return JsonWriter::number(v); }

// ---------------------------------------------------------------------------
// commands

const MetricChart& target_chart(const Scenario& s, const char* command) {
    if (s.chart) return *s.chart;
    if (s.warped) return s.warped->product;
    throw ScenarioError(std::string(command) + " requires a chart or a warped product");
}

int run_curvature(const Scenario& s, const std::string& out_dir, std::ostream& out) {
    const MetricChart& target = target_chart(s, "curvature");

    std::vector<std::vector<double>> pts = s.points;
    if (pts.empty()) {
        const SamplePlan plan = plan_for_chart(target, s.sample_count, s.seed);
        auto all = sample_points(plan);
        const std::size_t take = std::min<std::size_t>(3, all.size());
        pts.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take));
    }

    JsonWriter w;
    w.begin_object();
    w.key("command").value("curvature");
    w.key("coords").begin_array();
    for (const std::string& c : target.coords()) w.value(c);
    w.end_array();
    w.key("points").begin_array();
    for (const auto& p : pts) {
        if (p.size() != target.dim())
            throw ScenarioError("curvature point has " + std::to_string(p.size()) +
                                " coordinates; chart has " + std::to_string(target.dim()));
        const CurvatureBundle b = curvature_bundle(target, p);
        w.begin_object();
        w.key("point").begin_array();
        for (double x : p) w.value(x);
        w.end_array();
        w.key("scalar").value(b.scalar);
        w.key("ricci");
        write_matrix(w, b.ricci);
        w.key("einstein");
        write_matrix(w, b.einstein);
        w.key("christoffel").begin_array();
        for (std::size_t k = 0; k < target.dim(); ++k) {
            w.begin_array();
            for (std::size_t i = 0; i < target.dim(); ++i) {
                w.begin_array();
                for (std::size_t j = 0; j < target.dim(); ++j) w.value(b.christoffel(k, i, j));
                w.end_array();
            }
            w.end_array();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();

    write_file(artifact_path(out_dir, "report.json"), w.str() + "\n");
    out << w.str() << "\n";
    return 0;
}

int run_verify(const Scenario& s, const std::string& out_dir, std::ostream& out) {
    const MetricChart& target = target_chart(s, "verify");
    const SamplePlan plan = plan_for_chart(target, s.sample_count, s.seed);

    double lambda = 0.0;
    switch (s.policy) {
    case LambdaPolicy::Stated:
        if (!s.family)
            throw ScenarioError("lambda_bar policy \"stated\" requires a family warping");
        lambda = stated_constants(*s.family).lambda_bar_stated;
        break;
    case LambdaPolicy::Oracle: lambda = oracle_lambda(target, plan); break;
    case LambdaPolicy::Explicit: lambda = s.lambda_explicit; break;
    }

    VerificationReport report = einstein_residual(target, lambda, plan, s.tol_residual);
    report.tol_oracle_diff = s.tol_oracle;

    if (s.warped) {
        report.oracle_diff = oracle_diff(*s.warped, plan);
        const SamplePlan base_plan = plan_for_chart(s.warped->base, s.sample_count, s.seed);
        const auto base_pts = sample_points(base_plan);
        std::vector<double> lam, fib;
        lam.reserve(base_pts.size());
        fib.reserve(base_pts.size());
        for (const auto& p : base_pts) {
            lam.push_back(lambda_bar(*s.warped, p));
            fib.push_back(fiber_einstein_condition(*s.warped, p).lambda_fiber);
        }
        report.lambda_bar_stats = constancy(lam);
        report.lambda_fiber_stats = constancy(fib);
        if (s.family) {
            const FamilyConstants st = stated_constants(*s.family);
            report.sign_agreement["lambda_bar"] =
                sign_agreement(st.lambda_bar_stated, report.lambda_bar_stats.mean);
            report.sign_agreement["lambda_fiber"] =
                sign_agreement(st.lambda_fiber_stated, report.lambda_fiber_stats.mean);
        }
    } else {
        report.lambda_bar_stats = constancy(lambda_samples(target, plan));
    }

    report.lambda_bar_used = lambda;
    report.pass = report.max_rel_residual <= report.tol_residual &&
                  report.oracle_diff <= report.tol_oracle_diff;

    JsonWriter w;
    w.begin_object();
    w.key("command").value("verify");
    w.key("mode").value(s.warped ? "warped" : "chart");
    w.key("seed").value(s.seed);
    w.key("sample_count").value(static_cast<std::uint64_t>(s.sample_count));
    w.key("lambda_bar_used").value(report.lambda_bar_used);
    w.key("max_abs_residual").value(report.max_abs_residual);
    w.key("max_rel_residual").value(report.max_rel_residual);
    w.key("tol_residual").value(report.tol_residual);
    w.key("oracle_diff").value(report.oracle_diff);
    w.key("tol_oracle_diff").value(report.tol_oracle_diff);
    w.key("lambda_bar");
    write_stats(w, report.lambda_bar_stats);
    if (s.warped) {
        w.key("lambda_fiber");
        write_stats(w, report.lambda_fiber_stats);
    }
    if (!report.sign_agreement.empty()) {
        w.key("sign_agreement").begin_object();
        for (const auto& [k, v] : report.sign_agreement) w.key(k).value(v);
        w.end_object();
    }
    w.key("pass").value(report.pass);
    w.end_object();
    write_file(artifact_path(out_dir, "report.json"), w.str() + "\n");

    std::string csv;
    for (const std::string& c : target.coords()) csv += c + ",";
    csv += "max_abs,max_rel\n";
    for (const ResidualRow& row : report.rows) {
        for (double x : row.point) csv += fmt(x) + ",";
        csv += fmt(row.max_abs) + "," + fmt(row.max_rel) + "\n";
    }
    write_file(artifact_path(out_dir, "residuals.csv"), csv);

    out << "verify: lambda_bar_used=" << fmt(report.lambda_bar_used) << "\n";
    out << "verify: max_rel_residual=" << fmt(report.max_rel_residual) << " (tol "
        << fmt(report.tol_residual) << ")\n";
    if (s.warped)
        out << "verify: oracle_diff=" << fmt(report.oracle_diff) << " (tol "
            << fmt(report.tol_oracle_diff) << ")\n";
    out << "verify: lambda_bar mean=" << fmt(report.lambda_bar_stats.mean)
        << " std=" << fmt(report.lambda_bar_stats.std)
        << " constant=" << (report.lambda_bar_stats.is_constant ? "yes" : "no") << "\n";
    if (s.warped)
        out << "verify: lambda_fiber mean=" << fmt(report.lambda_fiber_stats.mean)
            << " std=" << fmt(report.lambda_fiber_stats.std)
            << " constant=" << (report.lambda_fiber_stats.is_constant ? "yes" : "no") << "\n";
    for (const auto& [k, v] : report.sign_agreement)
        out << "verify: sign " << k << ": " << v << "\n";
    out << "verify: " << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? 0 : 1;
}

void family_row(JsonWriter& w, const GRWFamily& fam) {
    w.key("kind").value(family_name(fam.kind));
    w.key("n").value(static_cast<std::uint64_t>(fam.n));
    w.key("L").value(fam.L);
    w.key("k").value(fam.k);
    w.key("b").value(fam.b);
}

int run_classify(const Scenario& s, const std::string& out_dir, std::ostream& out) {
    if (!s.has_classify)
        throw ScenarioError("classify requires a \"classify\" section in the scenario");

    const std::vector<GRWFamily> fams =
        classify(s.classify_lambda, s.classify_n, s.classify_L_hint);

    JsonWriter rows;
    rows.begin_array();
    for (const GRWFamily& fam : fams) {
        FamilyConstants c = stated_constants(fam);
        auto [fiber, fiber_constant] = matched_fiber(fam);
        (void)fiber_constant;
        const WarpedProduct w = family_chart(fam, fiber);
        const SamplePlan plan = plan_for_chart(w.product, s.sample_count, s.seed);
        c.lambda_bar_oracle = oracle_lambda(w.product, plan);
        const SamplePlan fiber_plan = plan_for_chart(fiber, s.sample_count, s.seed);
        c.lambda_fiber_oracle = oracle_lambda(fiber, fiber_plan);

        rows.begin_object();
        family_row(rows, fam);
        rows.key("lambda_bar_stated").value(c.lambda_bar_stated);
        rows.key("lambda_fiber_stated").value(c.lambda_fiber_stated);
        rows.key("lambda_bar_oracle").value(c.lambda_bar_oracle);
        rows.key("lambda_fiber_oracle").value(c.lambda_fiber_oracle);
        rows.end_object();

        out << "classify: " << family_name(fam.kind) << " L=" << fmt(fam.L)
            << " k=" << fmt(fam.k) << " b=" << fmt(fam.b)
            << " lambda_bar stated=" << fmt(c.lambda_bar_stated)
            << " oracle=" << fmt(c.lambda_bar_oracle)
            << " lambda_fiber stated=" << fmt(c.lambda_fiber_stated)
            << " oracle=" << fmt(c.lambda_fiber_oracle) << "\n";
    }
    rows.end_array();

    write_file(artifact_path(out_dir, "families.json"), rows.str() + "\n");

    JsonWriter w;
    w.begin_object();
    w.key("command").value("classify");
    w.key("lambda_bar").value(s.classify_lambda);
    w.key("n").value(static_cast<std::uint64_t>(s.classify_n));
    w.key("L_hint").value(s.classify_L_hint);
    w.key("families").raw_item(rows.str());
    w.end_object();
    write_file(artifact_path(out_dir, "report.json"), w.str() + "\n");
    return 0;
}

int run_discrepancies(const Scenario& s, const std::string& out_dir, std::ostream& out) {
    std::vector<GRWFamily> fams;
    if (s.family) {
        fams.push_back(*s.family);
    } else {
        for (const FamilyKind kind : {FamilyKind::Exp, FamilyKind::Cosh, FamilyKind::Sinh,
                                      FamilyKind::Cos, FamilyKind::Linear})
            fams.push_back(make_family(kind, 3, 1.0, 1.0, 0.0));
    }

    JsonWriter rows;
    rows.begin_array();
    for (const GRWFamily& fam : fams) {
        auto [fiber, fiber_constant] = matched_fiber(fam);
        (void)fiber_constant;
        const WarpedProduct w = family_chart(fam, fiber);
        const SamplePlan plan = plan_for_chart(w.product, s.sample_count, s.seed);
        const SamplePlan base_plan = plan_for_chart(w.base, s.sample_count, s.seed);
        const auto base_pts = sample_points(base_plan);

        const GrwConstants gc = grw_constants(w.f, fam.n, base_pts.front().front());
        const FamilyConstants st = stated_constants(fam);
        const double lam_oracle = oracle_lambda(w.product, plan);
        const SamplePlan fiber_plan = plan_for_chart(fiber, s.sample_count, s.seed);
        const double fib_oracle = oracle_lambda(fiber, fiber_plan);

        const double res_oracle =
            einstein_residual(w.product, lam_oracle, plan, s.tol_residual).max_rel_residual;
        const double res_stated =
            einstein_residual(w.product, st.lambda_bar_stated, plan, s.tol_residual)
                .max_rel_residual;
        const EigenvalueCheck eig = eigenvalue_check(w, lam_oracle, base_pts.front());

        rows.begin_object();
        family_row(rows, fam);
        rows.key("lambda_bar_stated").value(st.lambda_bar_stated);
        rows.key("lambda_bar_bform").value(gc.lambda_bar_bform);
        rows.key("lambda_bar_oracle").value(lam_oracle);
        rows.key("lambda_fiber_stated").value(st.lambda_fiber_stated);
        rows.key("lambda_fiber_bform").value(gc.lambda_fiber_bform);
        rows.key("lambda_fiber_oracle").value(fib_oracle);
        rows.key("ein_fiber_coeff").value(gc.ein_fiber_coeff);
        rows.key("residual_oracle_sign").value(res_oracle);
        rows.key("residual_stated_sign").value(res_stated);
        rows.key("eig_residual_derived").value(eig.residual_derived);
        rows.key("eig_residual_stated").value(eig.residual_stated);
        rows.key("sign_lambda_bar").value(sign_agreement(st.lambda_bar_stated, lam_oracle));
        rows.key("sign_lambda_fiber").value(sign_agreement(st.lambda_fiber_stated, fib_oracle));
        rows.end_object();

        const char* name = family_name(fam.kind);
        out << "discrepancies: " << name << " lambda_bar stated=" << fmt(st.lambda_bar_stated)
            << " bform=" << fmt(gc.lambda_bar_bform) << " oracle=" << fmt(lam_oracle) << " ("
            << sign_agreement(st.lambda_bar_stated, lam_oracle) << ")\n";
        out << "discrepancies: " << name
            << " lambda_fiber stated=" << fmt(st.lambda_fiber_stated)
            << " bform=" << fmt(gc.lambda_fiber_bform) << " oracle=" << fmt(fib_oracle) << " ("
            << sign_agreement(st.lambda_fiber_stated, fib_oracle) << ")\n";
        out << "discrepancies: " << name << " residual oracle-sign=" << fmt(res_oracle)
            << " stated-sign=" << fmt(res_stated) << "\n";
        out << "discrepancies: " << name
            << " eigenvalue residual derived=" << fmt(eig.residual_derived)
            << " stated=" << fmt(eig.residual_stated) << "\n";
    }
    rows.end_array();

    JsonWriter w;
    w.begin_object();
    w.key("command").value("discrepancies");
    w.key("seed").value(s.seed);
    w.key("sample_count").value(static_cast<std::uint64_t>(s.sample_count));
    w.key("families").raw_item(rows.str());
    w.end_object();
    write_file(artifact_path(out_dir, "report.json"), w.str() + "\n");
    return 0;
}

} // namespace

// ---------------------------------------------------------------------------

Scenario parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("invalid JSON: ") + e.what());
    }
    require_object(root, "scenario");
    check_keys(root, "scenario",
               {"version", "chart", "base", "fiber", "warping", "lambda_bar", "sampling",
                "tolerances", "points", "classify"});
    if (!root.contains("version"))
        throw ScenarioError("scenario requires \"version\": 1");
    if (!root["version"].is_number_integer() || root["version"].get<long long>() != 1)
        throw ScenarioError("unsupported scenario version (expected 1)");

    Scenario s;

    // ---- warping ----------------------------------------------------------
    bool have_family = false;
    GRWFamily fam;
    bool have_expr = false;
    std::string expr_src;
    std::map<std::string, double> expr_constants;
    if (root.contains("warping")) {
        const json& wv = require_object(root["warping"], "warping");
        check_keys(wv, "warping", {"family", "expr", "constants"});
        if (wv.contains("family")) {
            if (wv.contains("expr") || wv.contains("constants"))
                throw ScenarioError("warping.family cannot be combined with expr/constants");
            const json& f = require_object(wv["family"], "warping.family");
            check_keys(f, "warping.family", {"name", "n", "k", "L", "b"});
            if (!f.contains("name")) throw ScenarioError("warping.family requires a name");
            FamilyKind kind = FamilyKind::Exp;
            try {
                kind = family_from_name(get_string(f["name"], "warping.family.name"));
            } catch (const std::invalid_argument& e) {
                throw ScenarioError(e.what());
            }
            const std::size_t n =
                f.contains("n") ? get_count(f["n"], "warping.family.n", 2) : 3;
            const double k = f.contains("k") ? get_number(f["k"], "warping.family.k") : 1.0;
            const double L = f.contains("L") ? get_number(f["L"], "warping.family.L") : 1.0;
            const double b = f.contains("b") ? get_number(f["b"], "warping.family.b") : 0.0;
            fam = make_family(kind, n, k, L, b);
            have_family = true;
        } else if (wv.contains("expr")) {
            expr_src = get_string(wv["expr"], "warping.expr");
            if (wv.contains("constants"))
                expr_constants = get_constants(wv["constants"], "warping.constants");
            have_expr = true;
        } else {
            throw ScenarioError("warping requires \"family\" or \"expr\"");
        }
    }

    // ---- geometry ---------------------------------------------------------
    const bool fiber_is_matched =
        root.contains("fiber") && root["fiber"].is_string() &&
        root["fiber"].get<std::string>() == "matched";

    if (root.contains("chart")) {
        if (root.contains("base") || root.contains("fiber") || root.contains("warping"))
            throw ScenarioError("\"chart\" cannot be combined with base/fiber/warping");
        s.chart = parse_chart_entry(root["chart"], "chart").chart;
    } else if (have_family) {
        if (root.contains("base"))
            throw ScenarioError("a family warping fixes the base chart; remove \"base\"");
        s.family = fam;
        if (!root.contains("fiber") || fiber_is_matched) {
            auto [fiber, constant] = matched_fiber(fam);
            s.warped = family_chart(fam, fiber);
            s.has_fiber_constant = true;
            s.fiber_constant = constant;
        } else {
            ParsedChart fiber = parse_chart_entry(root["fiber"], "fiber", fam.n);
            s.warped = family_chart(fam, fiber.chart);
            s.has_fiber_constant = fiber.has_constant;
            s.fiber_constant = fiber.constant;
        }
    } else if (have_expr) {
        if (!root.contains("base") || !root.contains("fiber"))
            throw ScenarioError("a custom warping requires \"base\" and \"fiber\"");
        if (fiber_is_matched)
            throw ScenarioError("fiber \"matched\" requires a family warping");
        ParsedChart base = parse_chart_entry(root["base"], "base");
        ParsedChart fiber = parse_chart_entry(root["fiber"], "fiber");
        const Expression f =
            parse_field(expr_src, base.chart.coords(), expr_constants, "warping.expr");
        s.warped = assemble(base.chart, fiber.chart, f);
        s.has_fiber_constant = fiber.has_constant;
        s.fiber_constant = fiber.constant;
    } else if (root.contains("base") || root.contains("fiber")) {
        throw ScenarioError("\"base\"/\"fiber\" require a \"warping\" section");
    }

    // ---- lambda policy ----------------------------------------------------
    if (root.contains("lambda_bar")) {
        const json& lb = root["lambda_bar"];
        if (lb.is_string()) {
            const std::string p = lb.get<std::string>();
            if (p == "stated") s.policy = LambdaPolicy::Stated;
            else if (p == "oracle") s.policy = LambdaPolicy::Oracle;
            else
                throw ScenarioError(
                    "lambda_bar must be \"stated\", \"oracle\", or a number");
        } else if (lb.is_number()) {
            s.policy = LambdaPolicy::Explicit;
            s.lambda_explicit = lb.get<double>();
        } else {
            throw ScenarioError("lambda_bar must be \"stated\", \"oracle\", or a number");
        }
    }

    // ---- sampling / tolerances / points / classify ------------------------
    if (root.contains("sampling")) {
        const json& sp = require_object(root["sampling"], "sampling");
        check_keys(sp, "sampling", {"count", "seed"});
        if (sp.contains("count")) s.sample_count = get_count(sp["count"], "sampling.count", 1);
        if (sp.contains("seed")) s.seed = get_seed(sp["seed"], "sampling.seed");
    }
    if (root.contains("tolerances")) {
        const json& tv = require_object(root["tolerances"], "tolerances");
        check_keys(tv, "tolerances", {"residual", "oracle_diff"});
        if (tv.contains("residual")) {
            s.tol_residual = get_number(tv["residual"], "tolerances.residual");
            if (s.tol_residual <= 0) throw ScenarioError("tolerances.residual must be > 0");
        }
        if (tv.contains("oracle_diff")) {
            s.tol_oracle = get_number(tv["oracle_diff"], "tolerances.oracle_diff");
            if (s.tol_oracle <= 0) throw ScenarioError("tolerances.oracle_diff must be > 0");
        }
    }
    if (root.contains("points")) {
        const json& pv = root["points"];
        if (!pv.is_array()) throw ScenarioError("points must be an array of points");
        for (const json& p : pv) {
            if (!p.is_array()) throw ScenarioError("points entries must be arrays of numbers");
            std::vector<double> pt;
            for (const json& x : p) pt.push_back(get_number(x, "points[][]"));
            s.points.push_back(std::move(pt));
        }
    }
    if (root.contains("classify")) {
        const json& cv = require_object(root["classify"], "classify");
        check_keys(cv, "classify", {"lambda_bar", "n", "L_hint"});
        if (!cv.contains("lambda_bar") || !cv.contains("n"))
            throw ScenarioError("classify requires lambda_bar and n");
        s.has_classify = true;
        s.classify_lambda = get_number(cv["lambda_bar"], "classify.lambda_bar");
        s.classify_n = get_count(cv["n"], "classify.n", 2);
        if (cv.contains("L_hint")) {
            s.classify_L_hint = get_number(cv["L_hint"], "classify.L_hint");
            if (s.classify_L_hint <= 0) throw ScenarioError("classify.L_hint must be > 0");
        }
    }

    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot read scenario file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

int run_command(const std::string& command, const Scenario& scenario,
                const std::string& out_dir, std::ostream& out) {
    if (command == "curvature") return run_curvature(scenario, out_dir, out);
    if (command == "verify") return run_verify(scenario, out_dir, out);
    if (command == "classify") return run_classify(scenario, out_dir, out);
    if (command == "discrepancies") return run_discrepancies(scenario, out_dir, out);
    throw ScenarioError("unknown command '" + command + "'");
}

} // namespace warpcheck
