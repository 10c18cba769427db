/* Public C interface for the Robin-eigenvalue shape toolkit.
 *
 * The library computes Robin-Laplacian eigenvalues of polygonal domains with
 * interior cracks (slits carrying two independent traces), optimizes
 * eigenvalue functionals under a boundary-length budget, and runs batch
 * commands described by a JSON config record.
 *
 * Conventions: every function that can fail reports through its return value
 * (NULL handle or a nonzero rs_status) and leaves a human-readable message
 * in rs_last_error(), which is thread-local. Strings returned as char* are
 * heap-allocated; release them with rs_string_free(). Handles are opaque;
 * release them with their matching *_free().
 */

#ifndef ROBIN_SHAPES_H
#define ROBIN_SHAPES_H

#ifdef __cplusplus
extern "C" {
#endif

/* Exit-code compatible status values. */
typedef enum rs_status {
    RS_OK = 0,
    RS_BAD_INPUT = 1,      /* malformed config/geometry, violated preconditions */
    RS_SOLVER_FAILURE = 2, /* meshing or eigensolver failure */
    RS_VERIFY_FAILURE = 3  /* a verification suite reported FAIL */
} rs_status;

/* Message describing the most recent failure on this thread ("" if none). */
const char* rs_last_error(void);

void rs_string_free(char* s);

/* Runs one batch command described by a JSON config record, e.g.
 *   {"subcommand":"solve","geometry":"square.json","beta":1.0,"k":4,
 *    "out":"results","export":["csv","svg"]}
 * Subcommands: solve, oracle, mesh, optimize, widen, verify. Output files
 * land under the configured directory. If report_out is non-NULL it receives
 * the human-readable report text (free with rs_string_free). The returned
 * status doubles as the recommended process exit code.
 * The environment variable ROBIN_SHAPES_THREADS caps internal worker
 * threads (default: single-threaded deterministic execution).
 */
rs_status rs_run_command(const char* config_json, char** report_out);

/* ---- Fine-grained handles ---- */

typedef struct rs_domain rs_domain; /* polygonal domain with optional cracks */
typedef struct rs_mesh rs_mesh;     /* conforming triangle mesh */

/* Parses geometry JSON:
 * {"components":[{"outer":[[x,y],...],"holes":[[[x,y],...],...]}],
 *  "cracks":[{"component":i,"points":[[x,y],...]}]}
 * Returns NULL on malformed or invalid geometry. */
rs_domain* rs_domain_parse(const char* geometry_json);
void rs_domain_free(rs_domain* d);

/* Area and generalized boundary length Per(domain) + 2 * crack length. */
rs_status rs_domain_stats(const rs_domain* d, double* area_out, double* prob_out);

/* Deterministic triangulation at max edge length h (h <= 0 picks
 * 0.03 * sqrt(area)). Crack edges get duplicated node chains. */
rs_mesh* rs_mesh_build(const rs_domain* d, double h);
void rs_mesh_free(rs_mesh* m);

rs_status rs_mesh_counts(const rs_mesh* m, int* nodes_out, int* triangles_out, int* bedges_out);

/* Plain-text mesh: header "nodes N triangles T bedges B", node lines "x y",
 * triangle lines "i j k", boundary-edge lines "a b tagname tagid".
 * Free with rs_string_free. */
char* rs_mesh_text(const rs_mesh* m);

/* Smallest k eigenvalues of the Robin problem at the given beta >= 0.
 * lambdas_out must hold k doubles; residuals_out may be NULL or hold k. */
rs_status rs_solve_mesh(const rs_mesh* m, double beta, int k, double* lambdas_out,
                        double* residuals_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ROBIN_SHAPES_H */
