#include "spectrum.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>

#include "dense_eig.hpp"

namespace rshapes {

namespace {

Eigen::SparseMatrix<double> to_eigen(const SymmetricSparseMatrix& m) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(size_t(m.nonzeros()) * 2);
    const auto& rp = m.row_ptr();
    const auto& ci = m.col_idx();
    const auto& va = m.values();
    for (int r = 0; r < m.rows(); ++r) {
        for (int k = rp[size_t(r)]; k < rp[size_t(r) + 1]; ++k) {
            int c = ci[size_t(k)];
            trips.emplace_back(r, c, va[size_t(k)]);
            if (c != r) trips.emplace_back(c, r, va[size_t(k)]);
        }
    }
    Eigen::SparseMatrix<double> out(m.rows(), m.rows());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

double m_dot(const SymmetricSparseMatrix& M, const std::vector<double>& a,
             const std::vector<double>& b) {
    std::vector<double> mb = M.multiply(b);
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * mb[i];
    return s;
}

double normalized_residual(const SymmetricSparseMatrix& A, const SymmetricSparseMatrix& M,
                           double normA1, double normM1, double lambda,
                           const std::vector<double>& v) {
    std::vector<double> av = A.multiply(v);
    std::vector<double> mv = M.multiply(v);
    double r2 = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        double r = av[i] - lambda * mv[i];
        r2 += r * r;
    }
    double denom = normA1 + std::abs(lambda) * normM1;
    return std::sqrt(r2) / std::max(denom, 1e-300);
}

// Modified Gram-Schmidt in the M inner product, two passes per vector;
// vectors that collapse are refilled deterministically from `rng`.
void m_orthonormalize(std::vector<std::vector<double>>& V, const SymmetricSparseMatrix& M,
                      std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const size_t n = V.empty() ? 0 : V[0].size();
    for (size_t i = 0; i < V.size(); ++i) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (int pass = 0; pass < 2; ++pass) {
                for (size_t j = 0; j < i; ++j) {
                    double c = m_dot(M, V[j], V[i]);
                    for (size_t r = 0; r < n; ++r) V[i][r] -= c * V[j][r];
                }
            }
            double nrm = std::sqrt(std::max(m_dot(M, V[i], V[i]), 0.0));
            if (nrm > 1e-140) {
                for (size_t r = 0; r < n; ++r) V[i][r] /= nrm;
                break;
            }
            for (size_t r = 0; r < n; ++r) V[i][r] = U(rng);  // collapsed: refill
        }
    }
}

Spectrum solve_dense_route(const DiscreteSystem& sys, const SymmetricSparseMatrix& A,
                           const SolveOptions& opts) {
    auto r = dense_generalized_eig(A.to_dense(), sys.mass.to_dense(), sys.dofs, true);
    Spectrum s;
    s.method = "dense";
    s.beta = opts.beta;
    s.count = opts.count;
    s.seed = opts.seed;
    double normA1 = A.norm_one();
    double normM1 = sys.mass.norm_one();
    for (int i = 0; i < opts.count; ++i) {
        double lam = std::max(r.values[size_t(i)], 0.0);  // clamp -0-level noise
        s.eigenvalues.push_back(lam);
        s.residuals.push_back(normalized_residual(A, sys.mass, normA1, normM1, lam, r.vectors[size_t(i)]));
        if (opts.want_vectors) s.eigenvectors.push_back(std::move(r.vectors[size_t(i)]));
    }
    return s;
}

Spectrum solve_sparse_route(const DiscreteSystem& sys, const SymmetricSparseMatrix& A,
                            const SolveOptions& opts) {
    const int n = sys.dofs;
    const int k = opts.count;
    const int block = std::min(n, k + 5);
    const double normA1 = A.norm_one();
    const double normM1 = sys.mass.norm_one();

    // Tiny negative shift guards the beta = 0 Neumann kernel: factor A + |sigma| M.
    double sigma_mag = 1e-8 * sys.mass.trace() / double(n);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    int reshifts = 0;
    for (;; ++reshifts) {
        Eigen::SparseMatrix<double> shifted = to_eigen(A.add_scaled(sys.mass, sigma_mag));
        llt.compute(shifted);
        if (llt.info() == Eigen::Success) break;
        if (reshifts >= 3) throw SolverError("eigensolver: shifted factorization failed after 3 reshifts");
        sigma_mag *= 1000.0;
    }

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<std::vector<double>> V(static_cast<size_t>(block),
                                       std::vector<double>(static_cast<size_t>(n)));
    for (auto& col : V)
        for (auto& x : col) x = U(rng);
    m_orthonormalize(V, sys.mass, rng);

    Spectrum s;
    s.method = "sparse";
    s.beta = opts.beta;
    s.count = k;
    s.seed = opts.seed;
    s.shift = -sigma_mag;

    const int iter_cap = 300 * k;
    Eigen::VectorXd rhs(n), sol(n);
    for (int iter = 1; iter <= iter_cap; ++iter) {
        // W = (A + |sigma| M)^{-1} M V, then Rayleigh-Ritz on span(W).
        for (auto& col : V) {
            std::vector<double> mv = sys.mass.multiply(col);
            for (int r = 0; r < n; ++r) rhs[r] = mv[size_t(r)];
            sol = llt.solve(rhs);
            for (int r = 0; r < n; ++r) col[size_t(r)] = sol[r];
        }
        m_orthonormalize(V, sys.mass, rng);
        Eigen::MatrixXd G(block, block);
        std::vector<std::vector<double>> AV(static_cast<size_t>(block));
        for (int j = 0; j < block; ++j) AV[size_t(j)] = A.multiply(V[size_t(j)]);
        for (int i = 0; i < block; ++i)
            for (int j = i; j < block; ++j) {
                double g = 0.0;
                for (int r = 0; r < n; ++r) g += V[size_t(i)][size_t(r)] * AV[size_t(j)][size_t(r)];
                G(i, j) = G(j, i) = g;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
        if (es.info() != Eigen::Success) throw SolverError("eigensolver: Rayleigh-Ritz failed");

        std::vector<std::vector<double>> ritz(size_t(block), std::vector<double>(size_t(n), 0.0));
        for (int j = 0; j < block; ++j)
            for (int c = 0; c < block; ++c) {
                double z = es.eigenvectors()(c, j);
                for (int r = 0; r < n; ++r) ritz[size_t(j)][size_t(r)] += z * V[size_t(c)][size_t(r)];
            }
        V = std::move(ritz);

        bool done = true;
        std::vector<double> lam(static_cast<size_t>(k)), res(static_cast<size_t>(k));
        for (int j = 0; j < k; ++j) {
            lam[size_t(j)] = std::max(es.eigenvalues()(j), 0.0);
            res[size_t(j)] = normalized_residual(A, sys.mass, normA1, normM1, lam[size_t(j)], V[size_t(j)]);
            if (res[size_t(j)] > opts.tol) done = false;
        }
        if (done) {
            s.iterations = iter;
            s.eigenvalues = std::move(lam);
            s.residuals = std::move(res);
            if (opts.want_vectors) {
                V.resize(size_t(k));
                s.eigenvectors = std::move(V);
            }
            return s;
        }
    }
    throw SolverError("eigensolver: no convergence within the iteration cap");
}

}  // namespace

Spectrum smallest_eigenpairs(const DiscreteSystem& sys, const SolveOptions& opts) {
    if (opts.count < 1) throw SolverError("eigensolver: need count >= 1");
    if (opts.count > sys.dofs) throw SolverError("eigensolver: count exceeds the dof count");
    if (opts.beta < 0.0) throw SolverError("eigensolver: beta must be nonnegative");
    SymmetricSparseMatrix A = robin_operator(sys, opts.beta);
    bool dense = opts.method == SolveMethod::Dense ||
                 (opts.method == SolveMethod::Auto && sys.dofs < 500);
    return dense ? solve_dense_route(sys, A, opts) : solve_sparse_route(sys, A, opts);
}

double minmax_over_span(const DiscreteSystem& sys, double beta,
                        const std::vector<std::vector<double>>& vectors) {
    const int k = int(vectors.size());
    if (k < 1) throw SolverError("minmax_over_span: empty span");
    for (const auto& v : vectors)
        if (int(v.size()) != sys.dofs) throw SolverError("minmax_over_span: vector size mismatch");
    SymmetricSparseMatrix A = robin_operator(sys, beta);
    std::vector<double> ga(size_t(k) * size_t(k)), gm(size_t(k) * size_t(k));
    for (int j = 0; j < k; ++j) {
        std::vector<double> av = A.multiply(vectors[size_t(j)]);
        std::vector<double> mv = sys.mass.multiply(vectors[size_t(j)]);
        for (int i = 0; i < k; ++i) {
            double sa = 0.0, sm = 0.0;
            for (int r = 0; r < sys.dofs; ++r) {
                sa += vectors[size_t(i)][size_t(r)] * av[size_t(r)];
                sm += vectors[size_t(i)][size_t(r)] * mv[size_t(r)];
            }
            ga[size_t(i) * size_t(k) + size_t(j)] = sa;
            gm[size_t(i) * size_t(k) + size_t(j)] = sm;
        }
    }
    // Guard rank deficiency: the M-Gram must be comfortably positive definite.
    try {
        DenseEigResult gram = dense_symmetric_eig(gm, k, false);
        if (gram.values.front() <= 1e-12 * std::max(1.0, gram.values.back()))
            throw SolverError("minmax_over_span: span is rank deficient in the M inner product");
        DenseEigResult r = dense_generalized_eig(ga, gm, k, false);
        return r.values.back();
    } catch (const std::runtime_error& e) {
        throw SolverError(e.what());
    }
}

std::vector<double> solve_source(const DiscreteSystem& sys, double beta,
                                 const std::vector<double>& f) {
    if (!(beta > 0.0)) throw SolverError("solve_source: beta must be positive");
    if (int(f.size()) != sys.dofs) throw SolverError("solve_source: size mismatch");
    SymmetricSparseMatrix A = robin_operator(sys, beta);
    std::vector<double> rhs = sys.mass.multiply(f);
    double rhs_norm = 0.0;
    for (double v : rhs) rhs_norm += v * v;
    rhs_norm = std::sqrt(rhs_norm);
    if (rhs_norm == 0.0) return std::vector<double>(size_t(sys.dofs), 0.0);

    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    llt.compute(to_eigen(A));
    if (llt.info() != Eigen::Success) throw SolverError("solve_source: factorization failed");
    Eigen::VectorXd b(sys.dofs);
    for (int r = 0; r < sys.dofs; ++r) b[r] = rhs[size_t(r)];
    Eigen::VectorXd u = llt.solve(b);
    std::vector<double> out(size_t(sys.dofs));
    for (int r = 0; r < sys.dofs; ++r) out[size_t(r)] = u[r];
    // One refinement pass, then enforce the contract.
    std::vector<double> au = A.multiply(out);
    Eigen::VectorXd resid(sys.dofs);
    for (int r = 0; r < sys.dofs; ++r) resid[r] = rhs[size_t(r)] - au[size_t(r)];
    Eigen::VectorXd du = llt.solve(resid);
    for (int r = 0; r < sys.dofs; ++r) out[size_t(r)] += du[r];
    au = A.multiply(out);
    double rnorm = 0.0;
    for (int r = 0; r < sys.dofs; ++r) {
        double d = au[size_t(r)] - rhs[size_t(r)];
        rnorm += d * d;
    }
    if (std::sqrt(rnorm) > 1e-10 * rhs_norm)
        throw SolverError("solve_source: residual above 1e-10 relative");
    return out;
}

std::vector<SupNormEntry> sup_norm_check(const Spectrum& spectrum, const TriangleMesh& mesh) {
    std::vector<SupNormEntry> out;
    double lam_scale = spectrum.eigenvalues.empty() ? 1.0 : std::max(1.0, spectrum.eigenvalues.back());
    for (size_t i = 0; i < spectrum.eigenvectors.size(); ++i) {
        SupNormEntry e;
        e.lambda = spectrum.eigenvalues[i];
        if (spectrum.eigenvectors[i].size() != mesh.nodes.size())
            throw SolverError("sup_norm_check: eigenvector/mesh size mismatch");
        for (double v : spectrum.eigenvectors[i]) e.sup_norm = std::max(e.sup_norm, std::abs(v));
        e.included = e.lambda > 1e-8 * lam_scale;
        e.ratio = e.included ? e.sup_norm / (e.lambda * e.lambda) : 0.0;
        out.push_back(e);
    }
    return out;
}

}  // namespace rshapes
