#include "robin_shapes.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"

#include "assembly.hpp"
#include "commands.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "mesh.hpp"
#include "spectrum.hpp"

#include <Eigen/Core>

struct rs_domain {
    rshapes::PlanarDomain d;
};
struct rs_mesh {
    rshapes::TriangleMesh m;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// ROBIN_SHAPES_THREADS caps internal worker threads. Applied once per
// process; the numeric kernels stay deterministic at any setting.
void apply_thread_cap() {
    static const bool done = [] {
        if (const char* env = std::getenv("ROBIN_SHAPES_THREADS")) {
            const int n = std::atoi(env);
            if (n >= 1) Eigen::setNbThreads(n);
        } else {
            Eigen::setNbThreads(1);
        }
        return true;
    }();
    (void)done;
}

}  // namespace

extern "C" {

const char* rs_last_error(void) { return g_last_error.c_str(); }

void rs_string_free(char* s) { std::free(s); }

rs_status rs_run_command(const char* config_json, char** report_out) {
    apply_thread_cap();
    if (report_out) *report_out = nullptr;
    if (!config_json) {
        set_error("config_json is NULL");
        return RS_BAD_INPUT;
    }
    rshapes::CommandResult res;
    try {
        res = rshapes::run_command_json(config_json);
    } catch (const std::exception& e) {
        set_error(e.what());
        return RS_SOLVER_FAILURE;
    }
    set_error(res.error);
    if (report_out && !res.report.empty()) *report_out = dup_string(res.report);
    switch (res.exit_code) {
        case 0: return RS_OK;
        case 1: return RS_BAD_INPUT;
        case 2: return RS_SOLVER_FAILURE;
        case 3: return RS_VERIFY_FAILURE;
        default: return RS_SOLVER_FAILURE;
    }
}

rs_domain* rs_domain_parse(const char* geometry_json) {
    apply_thread_cap();
    if (!geometry_json) {
        set_error("geometry_json is NULL");
        return nullptr;
    }
    try {
        nlohmann::json j = nlohmann::json::parse(geometry_json);
        rshapes::PlanarDomain d = rshapes::domain_from_json(j);
        rshapes::ValidationReport rep = rshapes::validate(d);
        if (!rep.ok()) {
            set_error("invalid domain: " + rep.summary());
            return nullptr;
        }
        set_error("");
        return new rs_domain{std::move(d)};
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void rs_domain_free(rs_domain* d) { delete d; }

rs_status rs_domain_stats(const rs_domain* d, double* area_out, double* prob_out) {
    if (!d) {
        set_error("domain handle is NULL");
        return RS_BAD_INPUT;
    }
    if (area_out) *area_out = rshapes::area(d->d);
    if (prob_out) *prob_out = rshapes::generalized_perimeter(d->d);
    set_error("");
    return RS_OK;
}

rs_mesh* rs_mesh_build(const rs_domain* d, double h) {
    apply_thread_cap();
    if (!d) {
        set_error("domain handle is NULL");
        return nullptr;
    }
    try {
        rshapes::MeshingOptions mo;
        mo.target_h = h > 0.0 ? h : 0.03 * std::sqrt(rshapes::area(d->d));
        rshapes::TriangleMesh m = rshapes::triangulate(d->d, mo);
        set_error("");
        return new rs_mesh{std::move(m)};
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void rs_mesh_free(rs_mesh* m) { delete m; }

rs_status rs_mesh_counts(const rs_mesh* m, int* nodes_out, int* triangles_out, int* bedges_out) {
    if (!m) {
        set_error("mesh handle is NULL");
        return RS_BAD_INPUT;
    }
    if (nodes_out) *nodes_out = static_cast<int>(m->m.nodes.size());
    if (triangles_out) *triangles_out = static_cast<int>(m->m.triangles.size());
    if (bedges_out) *bedges_out = static_cast<int>(m->m.boundary_edges.size());
    set_error("");
    return RS_OK;
}

char* rs_mesh_text(const rs_mesh* m) {
    if (!m) {
        set_error("mesh handle is NULL");
        return nullptr;
    }
    set_error("");
    return dup_string(rshapes::mesh_to_text(m->m));
}

rs_status rs_solve_mesh(const rs_mesh* m, double beta, int k, double* lambdas_out,
                        double* residuals_out) {
    apply_thread_cap();
    if (!m || !lambdas_out) {
        set_error(!m ? "mesh handle is NULL" : "lambdas_out is NULL");
        return RS_BAD_INPUT;
    }
    if (k < 1) {
        set_error("k must be >= 1");
        return RS_BAD_INPUT;
    }
    if (beta < 0.0) {
        set_error("beta must be nonnegative");
        return RS_BAD_INPUT;
    }
    try {
        rshapes::DiscreteSystem sys = rshapes::assemble(m->m);
        rshapes::SolveOptions so;
        so.count = k;
        so.beta = beta;
        so.want_vectors = false;
        rshapes::Spectrum sp = rshapes::smallest_eigenpairs(sys, so);
        for (int i = 0; i < k; ++i) {
            lambdas_out[i] = sp.eigenvalues[static_cast<size_t>(i)];
            if (residuals_out) residuals_out[i] = sp.residuals[static_cast<size_t>(i)];
        }
        set_error("");
        return RS_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return RS_SOLVER_FAILURE;
    }
}

}  // extern "C"
