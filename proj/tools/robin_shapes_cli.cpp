// Command-line front end. Parses flags (and an optional --config JSON file,
// which flags override), assembles one canonical JSON config record, and
// hands it to the library's C interface. All computation happens behind
// rs_run_command; this file only does argument plumbing.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "robin_shapes.h"

namespace {

using nlohmann::json;

struct CommonFlags {
    std::string config_path;
    std::string geometry;
    std::string params_json;
    std::optional<double> beta;
    std::optional<long long> k;
    std::string objective;
    std::vector<long long> indices;
    std::optional<double> perimeter;
    std::optional<double> penalty;
    std::optional<double> h;
    std::optional<long long> seed;
    std::optional<long long> budget;
    std::string out;
    std::vector<std::string> exports;
    std::string filter;
    std::string inject_fault;
    std::vector<double> widths;
    std::string oracle_kind;
    std::optional<double> radius, length, lx, ly;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    // --h is the mesh-size flag, so help keeps only its long form.
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
    cmd->add_option("--geometry", f.geometry, "geometry JSON file");
    cmd->add_option("--params", f.params_json, "inline shape parameters (JSON object)");
    cmd->add_option("--beta", f.beta, "Robin parameter (>= 0)");
    cmd->add_option("--k", f.k, "number of eigenvalues");
    cmd->add_option("--objective", f.objective, "single | sum | pnorm:q");
    cmd->add_option("--indices", f.indices, "eigenvalue indices (1-based)")->delimiter(',');
    cmd->add_option("--perimeter", f.perimeter, "boundary-length constraint");
    cmd->add_option("--penalty", f.penalty, "perimeter penalty weight");
    cmd->add_option("--h", f.h, "mesh size (default 0.03 * sqrt(area))");
    cmd->add_option("--seed", f.seed, "random seed (default 0)");
    cmd->add_option("--budget", f.budget, "optimizer evaluation budget");
    cmd->add_option("--out", f.out, "output directory (default .)");
    cmd->add_option("--export", f.exports, "outputs to write: csv,svg,jsonl,mesh")->delimiter(',');
    cmd->add_option("--filter", f.filter, "verify only: run suites whose name contains this");
    cmd->add_option("--inject-fault", f.inject_fault, "verify only: fault-injection hook");
    cmd->add_option("--widths", f.widths, "widen only: channel widths, decreasing")->delimiter(',');
    cmd->add_option("--radius", f.radius, "oracle disk radius");
    cmd->add_option("--length", f.length, "oracle interval length");
    cmd->add_option("--lx", f.lx, "oracle rectangle width");
    cmd->add_option("--ly", f.ly, "oracle rectangle height");
}

// Builds the config record: file values first, then flag overrides.
int build_config(const std::string& subcommand, const CommonFlags& f, json& cfg, std::string& err) {
    cfg = json::object();
    if (!f.config_path.empty()) {
        std::ifstream is(f.config_path, std::ios::binary);
        if (!is) {
            err = "cannot read config file " + f.config_path;
            return 1;
        }
        try {
            cfg = json::parse(is);
        } catch (const json::parse_error& e) {
            err = std::string("config file is not valid JSON: ") + e.what();
            return 1;
        }
        if (!cfg.is_object()) {
            err = "config file must hold a JSON object";
            return 1;
        }
    }
    cfg["subcommand"] = subcommand;
    if (!f.geometry.empty()) cfg["geometry"] = f.geometry;
    if (!f.params_json.empty()) {
        try {
            cfg["params"] = json::parse(f.params_json);
        } catch (const json::parse_error& e) {
            err = std::string("--params is not valid JSON: ") + e.what();
            return 1;
        }
    }
    if (f.beta) cfg["beta"] = *f.beta;
    if (f.k) cfg["k"] = *f.k;
    if (!f.objective.empty()) cfg["objective"] = f.objective;
    if (!f.indices.empty()) cfg["indices"] = f.indices;
    if (f.perimeter) cfg["perimeter"] = *f.perimeter;
    if (f.penalty) cfg["penalty"] = *f.penalty;
    if (f.h) cfg["h"] = *f.h;
    if (f.seed) cfg["seed"] = *f.seed;
    if (f.budget) cfg["budget"] = *f.budget;
    if (!f.out.empty()) cfg["out"] = f.out;
    if (!f.exports.empty()) cfg["export"] = f.exports;
    if (!f.filter.empty()) cfg["filter"] = f.filter;
    if (!f.inject_fault.empty()) cfg["inject_fault"] = f.inject_fault;
    if (!f.widths.empty()) cfg["widths"] = f.widths;
    if (!f.oracle_kind.empty()) cfg["oracle"] = f.oracle_kind;
    if (f.radius) cfg["radius"] = *f.radius;
    if (f.length) cfg["length"] = *f.length;
    if (f.lx) cfg["lx"] = *f.lx;
    if (f.ly) cfg["ly"] = *f.ly;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robin-Laplacian eigenvalues and shape optimization on cracked polygons"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    const std::vector<std::string> names = {"solve", "oracle", "mesh", "optimize", "widen", "verify"};
    const std::vector<std::string> descriptions = {
        "compute the smallest eigenvalues of a domain",
        "print semi-analytic reference eigenvalues (disk, interval, rectangle)",
        "triangulate a domain and export the mesh",
        "minimize an eigenvalue functional over a shape family",
        "crack-relaxation experiment: widen a slit into open channels",
        "run the built-in invariant suites"};

    std::vector<CommonFlags> flags(names.size());
    std::vector<CLI::App*> cmds;
    for (size_t i = 0; i < names.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(names[i], descriptions[i]);
        add_common_flags(cmd, flags[i]);
        if (names[i] == "oracle")
            cmd->add_option("kind", flags[i].oracle_kind, "disk | interval | rectangle");
        cmds.push_back(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    for (size_t i = 0; i < names.size(); ++i) {
        if (!cmds[i]->parsed()) continue;
        json cfg;
        std::string err;
        if (build_config(names[i], flags[i], cfg, err) != 0) {
            std::fprintf(stderr, "error: %s\n", err.c_str());
            return 1;
        }
        char* report = nullptr;
        const rs_status status = rs_run_command(cfg.dump().c_str(), &report);
        if (report) {
            std::fputs(report, stdout);
            rs_string_free(report);
        }
        if (status != RS_OK) std::fprintf(stderr, "error: %s\n", rs_last_error());
        return static_cast<int>(status);
    }
    return 1;
}
