#pragma once

// Smallest eigenpairs of (K + beta B) u = lambda M u, plus the source solve
// a_beta(u, v) = (f, v). Sparse route: shift-invert block iteration with a
// sparse Cholesky of A + |sigma| M and Rayleigh-Ritz extraction; dense
// route: the hand-rolled reference eigensolver. Auto picks dense below 500
// dofs.

#include <cstdint>
#include <string>
#include <vector>

#include "assembly.hpp"

namespace rshapes {

enum class SolveMethod { Auto, Dense, Sparse };

struct SolveOptions {
    int count = 6;
    double beta = 1.0;
    // Residual acceptance: ||A u - lambda M u||_2 <= tol (||A||_1 + lambda ||M||_1).
    double tol = 1e-9;
    SolveMethod method = SolveMethod::Auto;
    std::uint64_t seed = 0x5eed2026;  // starting block generator
    bool want_vectors = true;
};

struct Spectrum {
    std::vector<double> eigenvalues;              // ascending, length count
    std::vector<double> residuals;                // normalized as in SolveOptions::tol
    std::vector<std::vector<double>> eigenvectors;  // M-orthonormal, when requested
    double beta = 0.0;
    int count = 0;
    // Diagnostics.
    std::string method;   // "dense" | "sparse"
    int iterations = 0;   // block iterations (0 for dense)
    double shift = 0.0;   // sigma actually used (< 0)
    std::uint64_t seed = 0;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Spectrum smallest_eigenpairs(const DiscreteSystem& sys, const SolveOptions& opts);

// Largest eigenvalue of the pencil projected on span(vectors): the discrete
// "max of the Rayleigh quotient over a k-dimensional subspace". Errors on an
// M-rank-deficient span.
double minmax_over_span(const DiscreteSystem& sys, double beta,
                        const std::vector<std::vector<double>>& vectors);

// u solving (K + beta B) u = M f; requires beta > 0 so the operator is PD.
// Relative residual (against ||M f||) at most 1e-10, enforced.
std::vector<double> solve_source(const DiscreteSystem& sys, double beta,
                                 const std::vector<double>& f);

struct SupNormEntry {
    double lambda = 0.0;
    double sup_norm = 0.0;
    double ratio = 0.0;   // sup / lambda^2; meaningful only when included
    bool included = false;  // false for near-zero lambda
};
// Diagnostic only: sup norms of M-normalized eigenfunctions and their ratio
// to lambda^2, the expected two-dimensional growth rate; bounded ratios mean
// the eigenfunctions stay uniformly controlled as lambda grows.
std::vector<SupNormEntry> sup_norm_check(const Spectrum& spectrum, const TriangleMesh& mesh);

}  // namespace rshapes
