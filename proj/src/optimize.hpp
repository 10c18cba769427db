#pragma once

// Derivative-free minimization of eigenvalue functionals over parametrized
// shapes. The boundary-length constraint Prob = p is enforced by exact
// rescaling before every evaluation (dilation monotonicity makes the "= p"
// and "<= p" problems equivalent), so every candidate the optimizer sees is
// exactly feasible. Companion probes: the two-ball splitting candidate, the
// slit-widening (crack relaxation) experiment, and the vertical cut probe.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "shape_params.hpp"

namespace rshapes {

enum class Combiner : std::uint8_t { Single, Sum, PNorm };
enum class ObjectiveMode : std::uint8_t { Constraint, Penalty };

struct Objective {
    std::vector<int> indices = {1};  // 1-based eigenvalue indices, nondecreasing
    Combiner combiner = Combiner::Single;
    double p_norm_q = 2.0;  // exponent for Combiner::PNorm (q >= 1)
    double beta = 1.0;
    ObjectiveMode mode = ObjectiveMode::Constraint;
    double perimeter = 1.0;       // target Prob in constraint mode
    double penalty_weight = 1.0;  // Lambda in penalty mode: value + Lambda * Prob
};

struct Evaluation {
    double value = std::numeric_limits<double>::infinity();
    bool feasible = false;
    std::string failure;          // why the evaluation is infeasible (when it is)
    std::vector<double> lambdas;  // the eigenvalues the combiner consumed
    double prob = 0.0;            // generalized perimeter of the meshed domain
    std::optional<PlanarDomain> domain;  // the domain actually meshed
    double mesh_h = 0.0;
    int dofs = 0;
};

// Scaled copy with generalized perimeter exactly p.
PlanarDomain project_to_perimeter(const PlanarDomain& domain, double p);

// realize -> project (constraint mode) -> mesh -> assemble -> solve ->
// combine. h <= 0 selects the mesh policy default 0.03 * sqrt(area).
// Failures of any stage come back as an infeasible +infinity evaluation.
Evaluation evaluate(const Objective& obj, const ShapeParams& params, double h = 0.0);

struct EvalRecord {
    int iter = 0;  // evaluation index, 0-based
    std::vector<double> params;
    double prob = 0.0;
    std::vector<double> lambdas;
    double objective = std::numeric_limits<double>::infinity();
    bool feasible = false;
    std::string failure;
};

struct OptimizationRun {
    std::vector<EvalRecord> log;  // every evaluation, in order
    // Accepted bests only; objective_trajectory is nonincreasing.
    std::vector<std::vector<double>> params_trajectory;
    std::vector<double> objective_trajectory;
    ShapeParams best_params;
    std::optional<PlanarDomain> best_domain;
    double best_value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    std::uint64_t seed = 0;
    double mesh_h = 0.0;  // 0 = per-candidate policy default
    // Re-evaluation of the winner at half the mesh size (kept separate so the
    // trajectory invariant is untouched by the accuracy bump).
    double polished_value = std::numeric_limits<double>::quiet_NaN();
    double polish_h = 0.0;
};

// Standard Nelder-Mead (reflect 1, expand 2, contract 0.5, shrink 0.5) on the
// flat parameter vector. Deterministic for a given seed; the initial simplex
// perturbs one coordinate per vertex by 5% of its characteristic range.
// `budget` caps total evaluations; the initial point is always evaluated.
OptimizationRun nelder_mead(const Objective& obj, const ShapeParams& init, int budget,
                            std::uint64_t seed = 0x5eed2026, double h = 0.0);

struct TwoBallResult {
    double value = std::numeric_limits<double>::infinity();
    int split_index = 0;  // i in min over i of max(lambda_i(B1), lambda_{k-i}(B2))
    double p1 = 0.0;      // perimeter of the first ball (0 when i = 0)
    double p2 = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

// Best value of max(lambda_i(ball, p1), lambda_{k-i}(ball, p - p1)) over
// i in {0..k} and p1, with lambda_0 := 0; golden-section to 1e-8 in p1.
// Single-ball configurations are i = 0 and i = k.
TwoBallResult two_ball_candidate(int k, double beta, double p);

struct WideningRow {
    double width = 0.0;
    double perimeter = 0.0;        // generalized perimeter of the widened domain
    std::vector<double> lambdas;   // lambda_1..lambda_k of the widened domain
};

struct WideningTable {
    std::vector<WideningRow> rows;
    std::vector<double> reference_lambdas;  // crack-aware lambda~_1..k of (host, crack)
    double reference_prob = 0.0;            // Prob(host, crack)
    double reference_h = 0.0;
};

// Crack relaxation: replaces the crack by an open channel (host minus a
// closed width-w miter-offset polygon around the polyline) and tabulates the
// Lipschitz-domain eigenvalues against the cracked reference. Channel meshes
// use min(h, 3w/4) so the channel is resolved. Widths must be positive and
// strictly decreasing; a channel touching the host boundary is an error.
WideningTable slit_widening_experiment(const PlanarDomain& host, const Polyline& crack,
                                       const std::vector<double>& widths, double beta, int k,
                                       double h = 0.0);

struct CutProbeRow {
    double t = 0.0;
    double section_length = 0.0;        // |Omega intersect {x = t}|
    std::vector<double> cut_lambdas;    // lambda_1..k of (Omega_t, Gamma_t)
    std::vector<double> base_lambdas;   // lambda_1..k of (Omega, Gamma)
    double lambda_diff = 0.0;           // lambda_k(cut) - lambda_k(base)
    double ratio = 0.0;                 // lambda_diff / section_length (0 when no cut)
};

// Diagnostic for the cut construction: Omega_t = Omega intersect {x < t},
// cracks truncated at t minus the clearance margin. Reports how much the
// k-th eigenvalue rises versus the length of the cut section.
std::vector<CutProbeRow> cut_probe(const PlanarDomain& domain, const std::vector<double>& t_values,
                                   double beta, int k, double h = 0.0);

}  // namespace rshapes
