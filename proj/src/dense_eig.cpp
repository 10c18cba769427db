#include "dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rshapes {

namespace {

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Householder reduction of the symmetric matrix stored in z (row-major n*n)
// to tridiagonal form: A = Q T Q^T. On exit d is the diagonal of T, e the
// subdiagonal (e[0] = 0), and z holds Q when want_vectors.
void tred2(std::vector<double>& z, int n, std::vector<double>& d, std::vector<double>& e,
           bool want_vectors) {
    auto at = [&z, n](int r, int c) -> double& { return z[size_t(r) * n + c]; };
    for (int i = n - 1; i > 0; --i) {
        int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k < i; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k < i; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j < i; ++j) {
                    if (want_vectors) at(j, i) = at(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k < j + 1; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k < i; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                double hh = f / (h + h);
                for (int j = 0; j < i; ++j) {
                    f = at(i, j);
                    double gj = e[j] - hh * f;
                    e[j] = gj;
                    for (int k = 0; k < j + 1; ++k) at(j, k) -= f * e[k] + gj * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    if (want_vectors) d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (want_vectors) {
            if (d[i] != 0.0) {
                for (int j = 0; j < i; ++j) {
                    double g = 0.0;
                    for (int k = 0; k < i; ++k) g += at(i, k) * at(k, j);
                    for (int k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
                }
            }
            d[i] = at(i, i);
            at(i, i) = 1.0;
            for (int j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
        } else {
            d[i] = at(i, i);
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e); rotations accumulate into z
// when want_vectors so its columns end up as eigenvectors.
void tqli(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n,
          bool want_vectors) {
    auto at = [&z, n](int r, int c) -> double& { return z[size_t(r) * n + c]; };
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("dense eigensolver: QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (want_vectors) {
                        for (int k = 0; k < n; ++k) {
                            f = at(k, i + 1);
                            at(k, i + 1) = s * at(k, i) + c * f;
                            at(k, i) = c * at(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Lower Cholesky factor of the s.p.d. matrix B (row-major), in place into L.
std::vector<double> cholesky_lower(const std::vector<double>& B, int n) {
    std::vector<double> L(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = B[size_t(i) * n + j];
            for (int k = 0; k < j; ++k) s -= L[size_t(i) * n + k] * L[size_t(j) * n + k];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::runtime_error("dense eigensolver: right-hand matrix is not positive definite");
                L[size_t(i) * n + j] = std::sqrt(s);
            } else {
                L[size_t(i) * n + j] = s / L[size_t(j) * n + j];
            }
        }
    }
    return L;
}

DenseEigResult finish(std::vector<double> d, std::vector<double> z, int n, bool want_vectors) {
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&d](int a, int b) { return d[a] < d[b]; });
    DenseEigResult out;
    out.values.resize(size_t(n));
    for (int i = 0; i < n; ++i) out.values[size_t(i)] = d[size_t(order[size_t(i)])];
    if (want_vectors) {
        out.vectors.assign(size_t(n), std::vector<double>(size_t(n)));
        for (int i = 0; i < n; ++i)
            for (int r = 0; r < n; ++r)
                out.vectors[size_t(i)][size_t(r)] = z[size_t(r) * n + order[size_t(i)]];
    }
    return out;
}

}  // namespace

DenseEigResult dense_symmetric_eig(const std::vector<double>& A, int n, bool want_vectors) {
    if (n <= 0 || A.size() != size_t(n) * size_t(n))
        throw std::runtime_error("dense eigensolver: bad matrix size");
    std::vector<double> z = A;
    std::vector<double> d(size_t(n), 0.0), e(size_t(n), 0.0);
    tred2(z, n, d, e, want_vectors);
    tqli(d, e, z, n, want_vectors);
    return finish(std::move(d), std::move(z), n, want_vectors);
}

DenseEigResult dense_generalized_eig(const std::vector<double>& A, const std::vector<double>& B,
                                     int n, bool want_vectors) {
    if (n <= 0 || A.size() != size_t(n) * size_t(n) || B.size() != size_t(n) * size_t(n))
        throw std::runtime_error("dense eigensolver: bad matrix size");
    if (n > 2000) throw std::runtime_error("dense eigensolver: dimension cap is 2000");
    std::vector<double> L = cholesky_lower(B, n);

    // C = L^{-1} A L^{-T}, built in two triangular solves.
    // Step 1: X = L^{-1} A  (forward substitution down each column of A).
    std::vector<double> X(size_t(n) * n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            double s = A[size_t(r) * n + c];
            for (int k = 0; k < r; ++k) s -= L[size_t(r) * n + k] * X[size_t(k) * n + c];
            X[size_t(r) * n + c] = s / L[size_t(r) * n + r];
        }
    }
    // Step 2: C = X L^{-T}  ⇔  C^T = L^{-1} X^T (forward substitution on rows of X).
    std::vector<double> C(size_t(n) * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            double s = X[size_t(r) * n + c];
            for (int k = 0; k < c; ++k) s -= L[size_t(c) * n + k] * C[size_t(r) * n + k];
            C[size_t(r) * n + c] = s / L[size_t(c) * n + c];
        }
    }
    // Symmetrize away the rounding skew before reduction.
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) {
            double v = 0.5 * (C[size_t(r) * n + c] + C[size_t(c) * n + r]);
            C[size_t(r) * n + c] = C[size_t(c) * n + r] = v;
        }

    std::vector<double> d(size_t(n), 0.0), e(size_t(n), 0.0);
    tred2(C, n, d, e, want_vectors);
    tqli(d, e, C, n, want_vectors);
    DenseEigResult out = finish(std::move(d), std::move(C), n, want_vectors);

    if (want_vectors) {
        // Back-transform: v = L^{-T} y (backward substitution); y orthonormal
        // makes v B-orthonormal.
        for (auto& v : out.vectors) {
            for (int r = n - 1; r >= 0; --r) {
                double s = v[size_t(r)];
                for (int k = r + 1; k < n; ++k) s -= L[size_t(k) * n + r] * v[size_t(k)];
                v[size_t(r)] = s / L[size_t(r) * n + r];
            }
        }
    }
    return out;
}

}  // namespace rshapes
