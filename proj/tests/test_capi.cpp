// Black-box tests of the shared library through its C header, plus
// end-to-end runs of the command-line binary (path injected via RS_CLI).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "robin_shapes.h"

namespace {

namespace fs = std::filesystem;

fs::path work_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "rs_capi_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    REQUIRE(os.good());
    os << content;
}

std::string read_text(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

const char* kSquareJson =
    R"({"components":[{"outer":[[0,0],[1,0],[1,1],[0,1]],"holes":[]}],"cracks":[]})";
const char* kSlitSquareJson =
    R"({"components":[{"outer":[[0,0],[1,0],[1,1],[0,1]],"holes":[]}],)"
    R"("cracks":[{"component":0,"points":[[0.3,0.5],[0.7,0.5]]}]})";

struct Run {
    rs_status status = RS_OK;
    std::string report;
};

Run run(const nlohmann::json& cfg) {
    char* report = nullptr;
    Run r;
    r.status = rs_run_command(cfg.dump().c_str(), &report);
    if (report) {
        r.report = report;
        rs_string_free(report);
    }
    return r;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    return lines;
}

// CSV column `col` of data row `row` (0-based, after the header).
double csv_field(const std::string& csv, size_t row, size_t col) {
    std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() > row + 1);
    std::istringstream is(lines[row + 1]);
    std::string field;
    for (size_t c = 0; c <= col; ++c) REQUIRE(std::getline(is, field, ','));
    return std::strtod(field.c_str(), nullptr);
}

int run_cli(const std::string& args, const fs::path& dir) {
    const char* cli = std::getenv("RS_CLI");
    REQUIRE(cli != nullptr);
    const std::string cmd = std::string(cli) + " " + args + " > " + (dir / "stdout.txt").string() +
                            " 2> " + (dir / "stderr.txt").string();
    const int ret = std::system(cmd.c_str());
    REQUIRE(ret != -1);
    return WIFEXITED(ret) ? WEXITSTATUS(ret) : -1;
}

}  // namespace

TEST_CASE("domain handles: parse, stats, and failure reporting") {
    rs_domain* d = rs_domain_parse(kSquareJson);
    REQUIRE(d != nullptr);
    double area = 0.0, prob = 0.0;
    CHECK(rs_domain_stats(d, &area, &prob) == RS_OK);
    CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(prob == doctest::Approx(4.0).epsilon(1e-14));
    rs_domain_free(d);

    rs_domain* slit = rs_domain_parse(kSlitSquareJson);
    REQUIRE(slit != nullptr);
    CHECK(rs_domain_stats(slit, &area, &prob) == RS_OK);
    CHECK(prob == doctest::Approx(4.8).epsilon(1e-14));
    rs_domain_free(slit);

    CHECK(rs_domain_parse("{ not json") == nullptr);
    CHECK(std::string(rs_last_error()).size() > 0);
    // Bowtie: self-intersecting outer loop must be rejected as invalid.
    CHECK(rs_domain_parse(
              R"({"components":[{"outer":[[0,0],[1,1],[1,0],[0,1]],"holes":[]}]})") == nullptr);
    CHECK(rs_domain_parse(nullptr) == nullptr);
}

TEST_CASE("mesh handles and the eigenvalue entry point") {
    rs_domain* d = rs_domain_parse(kSquareJson);
    REQUIRE(d != nullptr);
    rs_mesh* m = rs_mesh_build(d, 0.15);
    REQUIRE(m != nullptr);

    int nodes = 0, tris = 0, bedges = 0;
    CHECK(rs_mesh_counts(m, &nodes, &tris, &bedges) == RS_OK);
    CHECK(nodes > 20);
    CHECK(tris > 20);
    CHECK(bedges >= 4);

    char* text = rs_mesh_text(m);
    REQUIRE(text != nullptr);
    std::ostringstream header;
    header << "nodes " << nodes << " triangles " << tris << " bedges " << bedges;
    CHECK(std::string(text).rfind(header.str(), 0) == 0);
    rs_string_free(text);

    double lambdas[3] = {0, 0, 0};
    double residuals[3] = {0, 0, 0};
    REQUIRE(rs_solve_mesh(m, 1.0, 3, lambdas, residuals) == RS_OK);
    CHECK(lambdas[0] > 0.0);
    CHECK(lambdas[0] <= lambdas[1]);
    CHECK(lambdas[1] <= lambdas[2]);
    for (double r : residuals) CHECK(r >= 0.0);

    // Cross-check against the semi-analytic rectangle values fetched through
    // the same C interface (oracle subcommand prints CSV).
    Run oracle = run({{"subcommand", "oracle"},
                      {"oracle", "rectangle"},
                      {"lx", 1.0},
                      {"ly", 1.0},
                      {"beta", 1.0},
                      {"k", 3},
                      {"export", nlohmann::json::array()}});
    REQUIRE(oracle.status == RS_OK);
    for (size_t i = 0; i < 3; ++i) {
        const double ref = csv_field(oracle.report, i, 1);
        CHECK(lambdas[i] == doctest::Approx(ref).epsilon(0.03));
    }

    CHECK(rs_solve_mesh(m, -1.0, 1, lambdas, nullptr) == RS_BAD_INPUT);
    CHECK(rs_solve_mesh(m, 1.0, 0, lambdas, nullptr) == RS_BAD_INPUT);
    CHECK(rs_solve_mesh(nullptr, 1.0, 1, lambdas, nullptr) == RS_BAD_INPUT);

    rs_mesh_free(m);
    rs_domain_free(d);

    CHECK(rs_mesh_build(nullptr, 0.1) == nullptr);
}

TEST_CASE("solve command: outputs, exit codes, and failure modes") {
    const fs::path dir = work_dir("solve");
    write_text(dir / "square.json", kSquareJson);

    Run ok = run({{"subcommand", "solve"},
                  {"geometry", (dir / "square.json").string()},
                  {"beta", 1.0},
                  {"k", 4},
                  {"h", 0.1},
                  {"out", (dir / "out").string()},
                  {"export", {"csv", "svg", "mesh"}}});
    REQUIRE(ok.status == RS_OK);
    CHECK(ok.report.find("lambda:") != std::string::npos);

    const std::string csv = read_text(dir / "out" / "spectrum.csv");
    std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 5);  // header + 4 ascending rows
    CHECK(lines[0] == "k,lambda,residual");
    double prev = -1.0;
    for (size_t i = 0; i < 4; ++i) {
        const double l = csv_field(csv, i, 1);
        CHECK(l >= prev);
        prev = l;
    }
    CHECK(fs::exists(dir / "out" / "mesh.txt"));
    CHECK(fs::exists(dir / "out" / "spectrum.svg"));
    CHECK(fs::exists(dir / "out" / "meta.json"));
    // Eigenfunctions were appended to the mesh text.
    CHECK(read_text(dir / "out" / "mesh.txt").find("function 1") != std::string::npos);

    SUBCASE("malformed geometry file is bad input") {
        write_text(dir / "broken.json", "{ this is not json");
        Run bad = run({{"subcommand", "solve"}, {"geometry", (dir / "broken.json").string()}});
        CHECK(bad.status == RS_BAD_INPUT);
        CHECK(std::string(rs_last_error()).find("JSON") != std::string::npos);
    }
    SUBCASE("missing geometry file is bad input") {
        Run bad = run({{"subcommand", "solve"}, {"geometry", (dir / "nope.json").string()}});
        CHECK(bad.status == RS_BAD_INPUT);
    }
    SUBCASE("asking for more eigenvalues than dofs is a solver failure") {
        Run bad = run({{"subcommand", "solve"},
                       {"geometry", (dir / "square.json").string()},
                       {"k", 5000},
                       {"h", 0.3},
                       {"out", (dir / "out2").string()}});
        CHECK(bad.status == RS_SOLVER_FAILURE);
        CHECK(std::string(rs_last_error()).size() > 0);
    }
    SUBCASE("config-level nonsense is bad input") {
        CHECK(rs_run_command("{ nope", nullptr) == RS_BAD_INPUT);
        CHECK(run({{"subcommand", "launch"}}).status == RS_BAD_INPUT);
        CHECK(run({{"k", 3}}).status == RS_BAD_INPUT);
        CHECK(run({{"subcommand", "solve"},
                   {"geometry", (dir / "square.json").string()},
                   {"beta", -2.0}})
                  .status == RS_BAD_INPUT);
        CHECK(rs_run_command(nullptr, nullptr) == RS_BAD_INPUT);
    }
}

TEST_CASE("oracle command prints CSV rows") {
    Run disk = run({{"subcommand", "oracle"},
                    {"oracle", "disk"},
                    {"beta", 1.0},
                    {"k", 5},
                    {"export", nlohmann::json::array()}});
    REQUIRE(disk.status == RS_OK);
    std::vector<std::string> lines = split_lines(disk.report);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "k,lambda");
    double prev = 0.0;
    for (size_t i = 0; i < 5; ++i) {
        const double l = csv_field(disk.report, i, 1);
        CHECK(l >= prev);
        prev = l;
    }
    CHECK(run({{"subcommand", "oracle"}, {"oracle", "klein-bottle"}}).status == RS_BAD_INPUT);

    const fs::path dir = work_dir("oracle");
    Run filed = run({{"subcommand", "oracle"}, {"oracle", "disk"}, {"out", dir.string()}});
    REQUIRE(filed.status == RS_OK);
    CHECK(fs::exists(dir / "oracle.csv"));
}

TEST_CASE("mesh command exports the triangulation") {
    const fs::path dir = work_dir("mesh");
    write_text(dir / "slit.json", kSlitSquareJson);
    Run ok = run({{"subcommand", "mesh"},
                  {"geometry", (dir / "slit.json").string()},
                  {"h", 0.12},
                  {"out", dir.string()},
                  {"export", {"csv", "svg"}}});
    REQUIRE(ok.status == RS_OK);
    const std::string text = read_text(dir / "mesh.txt");
    CHECK(text.rfind("nodes ", 0) == 0);
    CHECK(text.find("crack_left") != std::string::npos);
    CHECK(fs::exists(dir / "mesh.svg"));
}

TEST_CASE("verify command: pass, filter, and fault injection") {
    Run all = run({{"subcommand", "verify"}});
    CHECK(all.status == RS_OK);
    CHECK(all.report.find("PASS scaling") != std::string::npos);
    CHECK(all.report.find("PASS union") != std::string::npos);
    CHECK(all.report.find("FAIL") == std::string::npos);

    Run filtered = run({{"subcommand", "verify"}, {"filter", "scaling"}});
    CHECK(filtered.status == RS_OK);
    CHECK(filtered.report.find("scaling") != std::string::npos);
    CHECK(filtered.report.find("union") == std::string::npos);

    Run faulty = run({{"subcommand", "verify"},
                      {"filter", "scaling"},
                      {"inject_fault", "boundary_scale_1.01"}});
    CHECK(faulty.status == RS_VERIFY_FAILURE);
    CHECK(faulty.report.find("FAIL scaling") != std::string::npos);

    CHECK(run({{"subcommand", "verify"}, {"filter", "no-such-suite"}}).status == RS_BAD_INPUT);
}

TEST_CASE("optimize command: summary, JSONL log, byte-identical reruns") {
    const fs::path dir = work_dir("optimize");
    const nlohmann::json params = {{"kind", "radial_fourier"},
                                   {"a0", 1.0},
                                   {"cos", {0.05}},
                                   {"sin", nlohmann::json::array()},
                                   {"vertices", 32}};
    nlohmann::json cfg = {{"subcommand", "optimize"}, {"params", params},
                          {"beta", 1.0},             {"k", 1},
                          {"perimeter", 6.2832},     {"budget", 8},
                          {"seed", 5},               {"h", 0.2},
                          {"out", (dir / "a").string()}};
    Run first = run(cfg);
    REQUIRE(first.status == RS_OK);
    CHECK(first.report.find("best objective") != std::string::npos);

    cfg["out"] = (dir / "b").string();
    Run second = run(cfg);
    REQUIRE(second.status == RS_OK);

    const std::string log_a = read_text(dir / "a" / "run.jsonl");
    const std::string log_b = read_text(dir / "b" / "run.jsonl");
    CHECK(!log_a.empty());
    CHECK(log_a == log_b);  // reproducibility: identical config and seed

    nlohmann::json summary = nlohmann::json::parse(read_text(dir / "a" / "summary.json"));
    CHECK(summary["evaluations"].get<int>() == 8);
    CHECK(split_lines(log_a).size() == 8);
    CHECK(summary["best_value"].is_number());
    CHECK(summary["best_lambdas"].is_array());
    nlohmann::json line0 = nlohmann::json::parse(split_lines(log_a)[0]);
    CHECK(line0.contains("iter"));
    CHECK(line0.contains("params"));
    CHECK(line0.contains("prob"));
    CHECK(line0.contains("lambdas"));
    CHECK(line0.contains("objective"));

    SUBCASE("constraint and penalty are mutually exclusive") {
        nlohmann::json bad = cfg;
        bad["penalty"] = 1.0;
        CHECK(run(bad).status == RS_BAD_INPUT);
        nlohmann::json neither = cfg;
        neither.erase("perimeter");
        CHECK(run(neither).status == RS_BAD_INPUT);
    }
    SUBCASE("optimize requires inline parameters") {
        nlohmann::json bad = cfg;
        bad.erase("params");
        CHECK(run(bad).status == RS_BAD_INPUT);
    }
}

TEST_CASE("widen command tabulates channels against the crack reference") {
    const fs::path dir = work_dir("widen");
    write_text(dir / "slit.json", kSlitSquareJson);
    Run ok = run({{"subcommand", "widen"},
                  {"geometry", (dir / "slit.json").string()},
                  {"widths", {0.12, 0.06}},
                  {"beta", 1.0},
                  {"k", 1},
                  {"h", 0.1},
                  {"out", dir.string()}});
    REQUIRE(ok.status == RS_OK);
    const std::string csv = read_text(dir / "widen.csv");
    std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 4);  // header + reference + 2 widths
    CHECK(lines[0] == "width,perimeter,lambda1");
    CHECK(lines[1].rfind("0,", 0) == 0);            // reference row
    CHECK(csv_field(csv, 0, 1) == doctest::Approx(4.8).epsilon(1e-13));
    CHECK(csv_field(csv, 1, 1) == doctest::Approx(4.0 + 2.0 * 0.52).epsilon(1e-13));

    // A crackless geometry cannot be widened.
    write_text(dir / "square.json", kSquareJson);
    CHECK(run({{"subcommand", "widen"}, {"geometry", (dir / "square.json").string()}}).status ==
          RS_BAD_INPUT);
}

TEST_CASE("command-line binary end to end") {
    const fs::path dir = work_dir("cli");
    write_text(dir / "square.json", kSquareJson);

    CHECK(run_cli("oracle disk --beta 1 --k 5 --out " + (dir / "oracle_out").string(), dir) == 0);
    const std::string csv = read_text(dir / "oracle_out" / "oracle.csv");
    CHECK(split_lines(csv).size() == 6);

    CHECK(run_cli("solve --geometry " + (dir / "square.json").string() + " --k 3 --h 0.15 --out " +
                      (dir / "solve_out").string(),
                  dir) == 0);
    CHECK(fs::exists(dir / "solve_out" / "spectrum.csv"));

    CHECK(run_cli("solve --geometry " + (dir / "missing.json").string(), dir) == 1);
    CHECK(run_cli("verify --filter union", dir) == 0);
    CHECK(run_cli("definitely-not-a-subcommand", dir) != 0);

    // Config file + flag override: the flag wins.
    nlohmann::json filecfg = {{"geometry", (dir / "square.json").string()},
                              {"k", 2},
                              {"h", 0.2},
                              {"out", (dir / "cfg_out").string()}};
    write_text(dir / "run.json", filecfg.dump());
    CHECK(run_cli("solve --config " + (dir / "run.json").string() + " --k 4", dir) == 0);
    CHECK(split_lines(read_text(dir / "cfg_out" / "spectrum.csv")).size() == 5);
}
