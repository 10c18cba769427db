#pragma once

// Symmetric sparse matrices stored as the upper triangle (row <= col) in
// CSR. Assembly is deterministic: triplets are normalized to the upper
// triangle, stably sorted, duplicates summed left to right, and entries
// whose sum is exactly zero are dropped.

#include <cstdint>
#include <string>
#include <vector>

namespace rshapes {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

class SymmetricSparseMatrix {
  public:
    SymmetricSparseMatrix() = default;
    static SymmetricSparseMatrix from_triplets(int n, std::vector<Triplet> triplets);

    int rows() const { return n_; }
    std::int64_t nonzeros() const { return std::int64_t(values_.size()); }

    // y = A x with the symmetric part expanded.
    void multiply(const double* x, double* y) const;
    std::vector<double> multiply(const std::vector<double>& x) const;

    // Max absolute column sum of the full (symmetric) matrix.
    double norm_one() const;
    // Sum of all entries of the full matrix: 1^T A 1.
    double entry_sum() const;
    double trace() const;

    // Entry lookup (full-matrix indices); zero when absent.
    double at(int r, int c) const;
    std::vector<double> to_dense() const;  // row-major n*n, full symmetric

    // One entry per stored (upper-triangle) coefficient, "row col value",
    // 1-based, row-major order, %.17g values.
    std::string to_coordinate_text() const;

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    // this + scale * other, same dimension; exact zeros drop.
    SymmetricSparseMatrix add_scaled(const SymmetricSparseMatrix& other, double scale) const;

  private:
    int n_ = 0;
    std::vector<int> row_ptr_;   // size n_+1
    std::vector<int> col_idx_;   // upper triangle, col >= row
    std::vector<double> values_;
};

}  // namespace rshapes
