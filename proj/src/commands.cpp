#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "assembly.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "mesh.hpp"
#include "optimize.hpp"
#include "oracles.hpp"
#include "shape_params.hpp"
#include "spectrum.hpp"
#include "verify.hpp"

namespace rshapes {

namespace {

using nlohmann::json;

// Input problems: wrong config shape, unreadable geometry, violated
// preconditions the caller controls. Mapped to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double num(const json& cfg, const char* key, double dflt) {
    if (!cfg.contains(key)) return dflt;
    if (!cfg[key].is_number()) throw ConfigError(std::string("config: \"") + key + "\" must be a number");
    return cfg[key].get<double>();
}

long long integer(const json& cfg, const char* key, long long dflt) {
    if (!cfg.contains(key)) return dflt;
    if (!cfg[key].is_number_integer())
        throw ConfigError(std::string("config: \"") + key + "\" must be an integer");
    return cfg[key].get<long long>();
}

std::string str(const json& cfg, const char* key, const std::string& dflt) {
    if (!cfg.contains(key)) return dflt;
    if (!cfg[key].is_string()) throw ConfigError(std::string("config: \"") + key + "\" must be a string");
    return cfg[key].get<std::string>();
}

std::vector<double> num_array(const json& cfg, const char* key, std::vector<double> dflt) {
    if (!cfg.contains(key)) return dflt;
    if (!cfg[key].is_array()) throw ConfigError(std::string("config: \"") + key + "\" must be an array");
    std::vector<double> out;
    for (const auto& v : cfg[key]) {
        if (!v.is_number()) throw ConfigError(std::string("config: \"") + key + "\" must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

bool has_export(const json& cfg, const char* what, const std::vector<std::string>& dflt) {
    if (!cfg.contains("export")) return std::find(dflt.begin(), dflt.end(), what) != dflt.end();
    if (!cfg["export"].is_array()) throw ConfigError("config: \"export\" must be an array of strings");
    for (const auto& e : cfg["export"]) {
        if (!e.is_string()) throw ConfigError("config: \"export\" must be an array of strings");
        if (e.get<std::string>() == what) return true;
    }
    return false;
}

std::filesystem::path out_dir(const json& cfg) {
    std::filesystem::path dir = str(cfg, "out", ".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("config: cannot create output directory " + dir.string());
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

// Geometry comes either from a JSON file (--geometry) or from inline shape
// parameters (--params). Everything wrong with it is the caller's input.
PlanarDomain load_domain(const json& cfg) {
    const bool has_geom = cfg.contains("geometry");
    const bool has_params = cfg.contains("params");
    if (has_geom == has_params)
        throw ConfigError("config: exactly one of \"geometry\" (file) or \"params\" (inline) is required");
    PlanarDomain d;
    if (has_geom) {
        const std::string path = str(cfg, "geometry", "");
        std::ifstream is(path, std::ios::binary);
        if (!is) throw ConfigError("geometry: cannot read " + path);
        json g;
        try {
            g = json::parse(is);
        } catch (const json::parse_error& e) {
            throw ConfigError("geometry: " + path + " is not valid JSON: " + e.what());
        }
        try {
            d = domain_from_json(g);
        } catch (const GeometryError& e) {
            throw ConfigError(e.what());
        }
    } else {
        if (!cfg["params"].is_object()) throw ConfigError("config: \"params\" must be an object");
        ShapeParams p;
        try {
            p = shape_params_from_json(cfg["params"]);
        } catch (const GeometryError& e) {
            throw ConfigError(e.what());
        }
        RealizeResult rr = realize(p);
        if (!rr.ok())
            throw ConfigError("params: shape does not realize: " + rr.report.summary());
        d = *rr.domain;
    }
    ValidationReport rep = validate(d);
    if (!rep.ok()) throw ConfigError("geometry: invalid domain: " + rep.summary());
    return d;
}

double solve_h(const json& cfg, const PlanarDomain& d) {
    const double h = num(cfg, "h", 0.0);
    if (h > 0.0) return h;
    return 0.03 * std::sqrt(area(d));
}

double checked_beta(const json& cfg) {
    const double beta = num(cfg, "beta", 1.0);
    if (beta < 0.0) throw ConfigError("config: beta must be nonnegative");
    return beta;
}

int checked_k(const json& cfg, int dflt) {
    const long long k = integer(cfg, "k", dflt);
    if (k < 1) throw ConfigError("config: k must be >= 1");
    if (k > 1'000'000) throw ConfigError("config: k is implausibly large");
    return static_cast<int>(k);
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                     start)
            .count();
    }
};

// Wall-clock timing is nondeterministic, so it lives in its own metadata
// file; every data file stays byte-identical across reruns.
void write_meta(const std::filesystem::path& dir, const std::string& sub, const Stopwatch& sw) {
    json meta;
    meta["subcommand"] = sub;
    meta["wall_ms"] = sw.ms();
    write_file(dir / "meta.json", meta.dump(2) + "\n");
}

CommandResult cmd_solve(const json& cfg) {
    Stopwatch sw;
    PlanarDomain domain = load_domain(cfg);
    const double beta = checked_beta(cfg);
    const int k = checked_k(cfg, 6);
    const double h = solve_h(cfg, domain);
    const bool want_csv = has_export(cfg, "csv", {"csv"});
    const bool want_mesh = has_export(cfg, "mesh", {"csv"});
    const bool want_svg = has_export(cfg, "svg", {"csv"});
    const std::filesystem::path dir = out_dir(cfg);

    MeshingOptions mo;
    mo.target_h = h;
    TriangleMesh mesh = triangulate(domain, mo);
    DiscreteSystem sys = assemble(mesh);

    SolveOptions so;
    so.count = k;
    so.beta = beta;
    so.seed = static_cast<std::uint64_t>(integer(cfg, "seed", 0));
    so.want_vectors = want_mesh || want_svg;
    Spectrum sp = smallest_eigenpairs(sys, so);

    std::ostringstream report;
    report << "solved " << k << " eigenvalues at beta " << format_double(beta) << " (dofs "
           << sys.dofs << ", mesh h " << format_double(h) << ", " << sp.method << " route)\n";
    report << "lambda:";
    for (double l : sp.eigenvalues) report << " " << format_double(l);
    report << "\n";
    if (want_csv) {
        write_file(dir / "spectrum.csv", spectrum_to_csv(sp));
        report << "wrote " << (dir / "spectrum.csv").string() << "\n";
    }
    if (want_mesh) {
        write_file(dir / "mesh.txt", mesh_to_text(mesh, sp.eigenvectors));
        report << "wrote " << (dir / "mesh.txt").string() << "\n";
    }
    if (want_svg) {
        write_file(dir / "spectrum.svg", heatmap_svg(mesh, sp.eigenvectors.at(0)));
        report << "wrote " << (dir / "spectrum.svg").string() << "\n";
    }
    write_meta(dir, "solve", sw);
    return {0, report.str(), ""};
}

CommandResult cmd_oracle(const json& cfg) {
    Stopwatch sw;
    const std::string which = str(cfg, "oracle", "");
    const double beta = checked_beta(cfg);
    const int k = checked_k(cfg, 5);
    std::vector<double> values;
    if (which == "disk") {
        const double r = num(cfg, "radius", 1.0);
        if (r <= 0.0) throw ConfigError("config: radius must be positive");
        values = disk_robin_eigenvalues(r, beta, k);
    } else if (which == "interval") {
        const double L = num(cfg, "length", 1.0);
        if (L <= 0.0) throw ConfigError("config: length must be positive");
        values = interval_robin_eigenvalues(L, beta, k);
    } else if (which == "rectangle") {
        const double lx = num(cfg, "lx", 1.0), ly = num(cfg, "ly", 1.0);
        if (lx <= 0.0 || ly <= 0.0) throw ConfigError("config: lx and ly must be positive");
        values = rectangle_robin_eigenvalues(lx, ly, beta, k);
    } else {
        throw ConfigError("config: \"oracle\" must be one of disk, interval, rectangle");
    }
    const std::string csv = values_to_csv(values);
    if (has_export(cfg, "csv", {"csv"})) {
        const std::filesystem::path dir = out_dir(cfg);
        write_file(dir / "oracle.csv", csv);
        write_meta(dir, "oracle", sw);
    }
    return {0, csv, ""};
}

CommandResult cmd_mesh(const json& cfg) {
    Stopwatch sw;
    PlanarDomain domain = load_domain(cfg);
    const double h = solve_h(cfg, domain);
    const std::filesystem::path dir = out_dir(cfg);
    MeshingOptions mo;
    mo.target_h = h;
    TriangleMesh mesh = triangulate(domain, mo);
    const MeshQuality q = mesh_quality(mesh);

    write_file(dir / "mesh.txt", mesh_to_text(mesh));
    std::ostringstream report;
    report << "nodes " << mesh.nodes.size() << " triangles " << mesh.triangles.size() << " bedges "
           << mesh.boundary_edges.size() << "\n";
    report << "min angle " << format_double(q.min_angle_deg) << " deg, max edge "
           << format_double(q.max_edge) << ", total area " << format_double(q.total_area) << "\n";
    report << "wrote " << (dir / "mesh.txt").string() << "\n";
    if (has_export(cfg, "svg", {"csv"})) {
        write_file(dir / "mesh.svg", mesh_to_svg(mesh));
        report << "wrote " << (dir / "mesh.svg").string() << "\n";
    }
    write_meta(dir, "mesh", sw);
    return {0, report.str(), ""};
}

Objective objective_from_config(const json& cfg) {
    Objective obj;
    obj.beta = checked_beta(cfg);

    if (cfg.contains("indices")) {
        if (!cfg["indices"].is_array()) throw ConfigError("config: \"indices\" must be an array");
        obj.indices.clear();
        for (const auto& v : cfg["indices"]) {
            if (!v.is_number_integer()) throw ConfigError("config: \"indices\" must hold integers");
            obj.indices.push_back(v.get<int>());
        }
        if (obj.indices.empty()) throw ConfigError("config: \"indices\" must not be empty");
    } else {
        obj.indices = {checked_k(cfg, 1)};
    }
    for (size_t i = 0; i < obj.indices.size(); ++i) {
        if (obj.indices[i] < 1) throw ConfigError("config: eigenvalue indices are 1-based");
        if (i > 0 && obj.indices[i] < obj.indices[i - 1])
            throw ConfigError("config: \"indices\" must be nondecreasing");
    }

    std::string kind = str(cfg, "objective", obj.indices.size() == 1 ? "single" : "sum");
    if (kind == "single") {
        obj.combiner = Combiner::Single;
        if (obj.indices.size() != 1)
            throw ConfigError("config: objective \"single\" takes exactly one index");
    } else if (kind == "sum") {
        obj.combiner = Combiner::Sum;
    } else if (kind.rfind("pnorm", 0) == 0) {
        obj.combiner = Combiner::PNorm;
        obj.p_norm_q = 2.0;
        if (kind.size() > 5) {
            if (kind[5] != ':') throw ConfigError("config: p-norm objective is \"pnorm:q\"");
            try {
                obj.p_norm_q = std::stod(kind.substr(6));
            } catch (...) {
                throw ConfigError("config: cannot parse the p-norm exponent in \"" + kind + "\"");
            }
        }
        if (obj.p_norm_q < 1.0) throw ConfigError("config: p-norm exponent must be >= 1");
    } else {
        throw ConfigError("config: \"objective\" must be single, sum, or pnorm:q");
    }

    const bool has_p = cfg.contains("perimeter");
    const bool has_pen = cfg.contains("penalty");
    if (has_p == has_pen)
        throw ConfigError("config: optimize needs exactly one of \"perimeter\" or \"penalty\"");
    if (has_p) {
        obj.mode = ObjectiveMode::Constraint;
        obj.perimeter = num(cfg, "perimeter", 0.0);
        if (obj.perimeter <= 0.0) throw ConfigError("config: \"perimeter\" must be positive");
    } else {
        obj.mode = ObjectiveMode::Penalty;
        obj.penalty_weight = num(cfg, "penalty", 0.0);
        if (obj.penalty_weight <= 0.0) throw ConfigError("config: \"penalty\" must be positive");
    }
    return obj;
}

CommandResult cmd_optimize(const json& cfg) {
    Stopwatch sw;
    if (!cfg.contains("params") || !cfg["params"].is_object())
        throw ConfigError("config: optimize needs inline \"params\" shape parameters");
    ShapeParams init;
    try {
        init = shape_params_from_json(cfg["params"]);
    } catch (const GeometryError& e) {
        throw ConfigError(e.what());
    }
    const Objective obj = objective_from_config(cfg);
    const long long budget = integer(cfg, "budget", 100);
    if (budget < 0) throw ConfigError("config: \"budget\" must be nonnegative");
    const std::uint64_t seed = static_cast<std::uint64_t>(integer(cfg, "seed", 0));
    const double h = num(cfg, "h", 0.0);
    const std::filesystem::path dir = out_dir(cfg);

    OptimizationRun run = nelder_mead(obj, init, static_cast<int>(budget), seed, h);
    if (!std::isfinite(run.best_value))
        throw SolverError("no feasible shape found within the evaluation budget");

    if (has_export(cfg, "jsonl", {"jsonl"})) {
        std::ostringstream lines;
        for (const EvalRecord& rec : run.log) {
            json line;
            line["iter"] = rec.iter;
            line["params"] = rec.params;
            line["prob"] = rec.prob;
            line["lambdas"] = rec.lambdas;
            line["objective"] = rec.feasible ? json(rec.objective) : json(nullptr);
            lines << line.dump() << "\n";
        }
        write_file(dir / "run.jsonl", lines.str());
    }

    // Lambdas/prob of the winner, from its log record.
    json best_lambdas = json::array();
    double best_prob = 0.0;
    for (const EvalRecord& rec : run.log) {
        if (rec.feasible && rec.objective == run.best_value) {
            best_lambdas = rec.lambdas;
            best_prob = rec.prob;
            break;
        }
    }
    json summary;
    summary["best_value"] = run.best_value;
    summary["polished_value"] =
        std::isfinite(run.polished_value) ? json(run.polished_value) : json(nullptr);
    summary["best_lambdas"] = best_lambdas;
    summary["best_prob"] = best_prob;
    summary["best_params"] = to_vector(run.best_params);
    summary["evaluations"] = run.evaluations;
    summary["budget"] = budget;
    summary["seed"] = seed;
    write_file(dir / "summary.json", summary.dump(2) + "\n");

    if (has_export(cfg, "svg", {"jsonl"}) && run.best_domain) {
        MeshingOptions mo;
        mo.target_h = run.polish_h > 0.0 ? run.polish_h : 0.03 * std::sqrt(area(*run.best_domain));
        TriangleMesh mesh = triangulate(*run.best_domain, mo);
        SolveOptions so;
        so.count = obj.indices.back();
        so.beta = obj.beta;
        Spectrum sp = smallest_eigenpairs(assemble(mesh), so);
        write_file(dir / "best.svg", heatmap_svg(mesh, sp.eigenvectors.at(0)));
    }
    write_meta(dir, "optimize", sw);

    std::ostringstream report;
    report << "best objective " << format_double(run.best_value) << " after " << run.evaluations
           << " evaluations";
    if (std::isfinite(run.polished_value))
        report << " (polished at h/2: " << format_double(run.polished_value) << ")";
    report << "\nwrote " << (dir / "summary.json").string() << "\n";
    return {0, report.str(), ""};
}

CommandResult cmd_widen(const json& cfg) {
    Stopwatch sw;
    PlanarDomain domain = load_domain(cfg);
    if (domain.cracks.size() != 1)
        throw ConfigError("widen: the geometry must contain exactly one crack");
    PlanarDomain host = domain;
    host.cracks.clear();
    const Polyline crack = domain.cracks[0].points;

    std::vector<double> widths = num_array(cfg, "widths", {0.04, 0.02, 0.01});
    for (size_t i = 0; i < widths.size(); ++i) {
        if (widths[i] <= 0.0) throw ConfigError("config: \"widths\" must be positive");
        if (i > 0 && widths[i] >= widths[i - 1])
            throw ConfigError("config: \"widths\" must be strictly decreasing");
    }
    const double beta = checked_beta(cfg);
    const int k = checked_k(cfg, 3);
    const double h = num(cfg, "h", 0.0);
    const std::filesystem::path dir = out_dir(cfg);

    WideningTable table = slit_widening_experiment(host, crack, widths, beta, k, h);

    std::ostringstream csv;
    csv << "width,perimeter";
    for (int j = 1; j <= k; ++j) csv << ",lambda" << j;
    csv << "\n";
    csv << 0 << "," << format_double(table.reference_prob);
    for (double l : table.reference_lambdas) csv << "," << format_double(l);
    csv << "\n";
    for (const WideningRow& row : table.rows) {
        csv << format_double(row.width) << "," << format_double(row.perimeter);
        for (double l : row.lambdas) csv << "," << format_double(l);
        csv << "\n";
    }
    std::ostringstream report;
    report << "crack reference (width 0) plus " << table.rows.size()
           << " widened channels, k = " << k << "\n";
    for (const WideningRow& row : table.rows) {
        double gap = 0.0;
        for (int j = 0; j < k; ++j)
            gap = std::max(gap, std::abs(row.lambdas[static_cast<size_t>(j)] -
                                         table.reference_lambdas[static_cast<size_t>(j)]));
        report << "width " << format_double(row.width) << ": max |lambda - reference| = "
               << format_double(gap) << "\n";
    }
    if (has_export(cfg, "csv", {"csv"})) {
        write_file(dir / "widen.csv", csv.str());
        report << "wrote " << (dir / "widen.csv").string() << "\n";
    }
    write_meta(dir, "widen", sw);
    return {0, report.str(), ""};
}

CommandResult cmd_verify(const json& cfg) {
    const std::string filter = str(cfg, "filter", "");
    const std::string inject = str(cfg, "inject_fault", "");
    VerifyReport report = run_verification(filter, inject);
    if (!filter.empty() && report.checks.empty())
        throw ConfigError("verify: filter \"" + filter + "\" matched no suites");
    return {report.all_passed() ? 0 : 3, report.table(), ""};
}

}  // namespace

CommandResult run_command_json(const std::string& config_text) {
    json cfg;
    try {
        cfg = json::parse(config_text);
    } catch (const json::parse_error& e) {
        return {1, "", std::string("config: invalid JSON: ") + e.what()};
    }
    if (!cfg.is_object() || !cfg.contains("subcommand") || !cfg["subcommand"].is_string())
        return {1, "", "config: needs a \"subcommand\" string"};
    const std::string sub = cfg["subcommand"].get<std::string>();
    try {
        if (sub == "solve") return cmd_solve(cfg);
        if (sub == "oracle") return cmd_oracle(cfg);
        if (sub == "mesh") return cmd_mesh(cfg);
        if (sub == "optimize") return cmd_optimize(cfg);
        if (sub == "widen") return cmd_widen(cfg);
        if (sub == "verify") return cmd_verify(cfg);
        return {1, "", "config: unknown subcommand \"" + sub + "\""};
    } catch (const ConfigError& e) {
        return {1, "", e.what()};
    } catch (const GeometryError& e) {
        return {1, "", e.what()};
    } catch (const std::exception& e) {
        return {2, "", e.what()};
    }
}

}  // namespace rshapes
