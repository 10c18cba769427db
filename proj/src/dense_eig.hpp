#pragma once

// Hand-rolled dense symmetric generalized eigensolver: Cholesky reduction of
// A v = lambda B v to standard form, Householder tridiagonalization, and
// implicit-shift QL. Deliberately independent of any external linear-algebra
// library so it can serve as the reference route against the sparse solver.

#include <vector>

namespace rshapes {

struct DenseEigResult {
    std::vector<double> values;                 // ascending
    std::vector<std::vector<double>> vectors;   // vectors[i] pairs with values[i]; B-orthonormal
};

// A, B row-major n*n; A symmetric, B symmetric positive definite. Throws
// std::runtime_error if B is not positive definite or QL fails to converge.
DenseEigResult dense_generalized_eig(const std::vector<double>& A, const std::vector<double>& B,
                                     int n, bool want_vectors);

// Standard symmetric eigenproblem (B = I).
DenseEigResult dense_symmetric_eig(const std::vector<double>& A, int n, bool want_vectors);

}  // namespace rshapes
