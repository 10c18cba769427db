#include "sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rshapes {

SymmetricSparseMatrix SymmetricSparseMatrix::from_triplets(int n, std::vector<Triplet> triplets) {
    if (n < 0) throw std::runtime_error("sparse: negative dimension");
    for (auto& t : triplets) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::runtime_error("sparse: triplet index out of range");
        if (t.row > t.col) std::swap(t.row, t.col);
    }
    // Stable sort keeps duplicate contributions in insertion order, so the
    // left-to-right sums below are reproducible run to run.
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SymmetricSparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(size_t(n) + 1, 0);
    size_t i = 0;
    while (i < triplets.size()) {
        size_t j = i;
        double sum = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col) {
            sum += triplets[j].value;
            ++j;
        }
        if (sum != 0.0) {  // drop tolerance is exactly zero
            m.col_idx_.push_back(triplets[i].col);
            m.values_.push_back(sum);
            ++m.row_ptr_[size_t(triplets[i].row) + 1];
        }
        i = j;
    }
    for (int r = 0; r < n; ++r) m.row_ptr_[size_t(r) + 1] += m.row_ptr_[size_t(r)];
    return m;
}

void SymmetricSparseMatrix::multiply(const double* x, double* y) const {
    for (int r = 0; r < n_; ++r) y[r] = 0.0;
    for (int r = 0; r < n_; ++r) {
        for (int k = row_ptr_[size_t(r)]; k < row_ptr_[size_t(r) + 1]; ++k) {
            int c = col_idx_[size_t(k)];
            double v = values_[size_t(k)];
            y[r] += v * x[c];
            if (c != r) y[c] += v * x[r];
        }
    }
}

std::vector<double> SymmetricSparseMatrix::multiply(const std::vector<double>& x) const {
    if (int(x.size()) != n_) throw std::runtime_error("sparse: multiply size mismatch");
    std::vector<double> y(size_t(n_), 0.0);
    multiply(x.data(), y.data());
    return y;
}

double SymmetricSparseMatrix::norm_one() const {
    std::vector<double> colsum(size_t(n_), 0.0);
    for (int r = 0; r < n_; ++r) {
        for (int k = row_ptr_[size_t(r)]; k < row_ptr_[size_t(r) + 1]; ++k) {
            int c = col_idx_[size_t(k)];
            double a = std::abs(values_[size_t(k)]);
            colsum[size_t(c)] += a;
            if (c != r) colsum[size_t(r)] += a;
        }
    }
    double best = 0.0;
    for (double v : colsum) best = std::max(best, v);
    return best;
}

double SymmetricSparseMatrix::entry_sum() const {
    double s = 0.0;
    for (int r = 0; r < n_; ++r) {
        for (int k = row_ptr_[size_t(r)]; k < row_ptr_[size_t(r) + 1]; ++k) {
            s += values_[size_t(k)];
            if (col_idx_[size_t(k)] != r) s += values_[size_t(k)];
        }
    }
    return s;
}

double SymmetricSparseMatrix::trace() const {
    double s = 0.0;
    for (int r = 0; r < n_; ++r)
        for (int k = row_ptr_[size_t(r)]; k < row_ptr_[size_t(r) + 1]; ++k)
            if (col_idx_[size_t(k)] == r) s += values_[size_t(k)];
    return s;
}

double SymmetricSparseMatrix::at(int r, int c) const {
    if (r > c) std::swap(r, c);
    for (int k = row_ptr_[size_t(r)]; k < row_ptr_[size_t(r) + 1]; ++k)
        if (col_idx_[size_t(k)] == c) return values_[size_t(k)];
    return 0.0;
}

std::vector<double> SymmetricSparseMatrix::to_dense() const {
    std::vector<double> d(size_t(n_) * size_t(n_), 0.0);
    for (int r = 0; r < n_; ++r) {
        for (int k = row_ptr_[size_t(r)]; k < row_ptr_[size_t(r) + 1]; ++k) {
            int c = col_idx_[size_t(k)];
            d[size_t(r) * size_t(n_) + size_t(c)] = values_[size_t(k)];
            d[size_t(c) * size_t(n_) + size_t(r)] = values_[size_t(k)];
        }
    }
    return d;
}

std::string SymmetricSparseMatrix::to_coordinate_text() const {
    std::string out;
    char buf[64];
    for (int r = 0; r < n_; ++r) {
        for (int k = row_ptr_[size_t(r)]; k < row_ptr_[size_t(r) + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, col_idx_[size_t(k)] + 1,
                          values_[size_t(k)]);
            out += buf;
        }
    }
    return out;
}

SymmetricSparseMatrix SymmetricSparseMatrix::add_scaled(const SymmetricSparseMatrix& other,
                                                        double scale) const {
    if (other.n_ != n_) throw std::runtime_error("sparse: add_scaled dimension mismatch");
    std::vector<Triplet> trips;
    trips.reserve(values_.size() + other.values_.size());
    for (int r = 0; r < n_; ++r)
        for (int k = row_ptr_[size_t(r)]; k < row_ptr_[size_t(r) + 1]; ++k)
            trips.push_back({r, col_idx_[size_t(k)], values_[size_t(k)]});
    for (int r = 0; r < n_; ++r)
        for (int k = other.row_ptr_[size_t(r)]; k < other.row_ptr_[size_t(r) + 1]; ++k)
            trips.push_back({r, other.col_idx_[size_t(k)], scale * other.values_[size_t(k)]});
    return from_triplets(n_, std::move(trips));
}

}  // namespace rshapes
