// Thin triplet-based sparse matrix with a direct LU solve behind it.
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <vector>

#include "tscond/common.hpp"

namespace tscond {

struct SparseMatrix {
    int size = 0;
    std::vector<Eigen::Triplet<double>> triplets;

    explicit SparseMatrix(int n = 0) : size(n) {}

    void add(int row, int col, double value) { triplets.emplace_back(row, col, value); }

    Eigen::SparseMatrix<double> compressed() const {
        Eigen::SparseMatrix<double> m(size, size);
        m.setFromTriplets(triplets.begin(), triplets.end());
        m.makeCompressed();
        return m;
    }
};

// Direct sparse LU solve with a residual check: ||K u - g||_inf <= tol ||g||_inf.
inline std::vector<double> solve_sparse(const SparseMatrix& K, const std::vector<double>& g,
                                        double tol = 1e-10) {
    ensure(tol > 0.0, "solve_sparse: tolerance must be positive");
    if (static_cast<int>(g.size()) != K.size)
        throw numerical_error("solve_sparse: size mismatch");
    if (K.size == 0) return {};

    Eigen::SparseMatrix<double> A = K.compressed();
    Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw numerical_error("solve_sparse: factorization failed (singular or rank-deficient system)");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw numerical_error("solve_sparse: back-substitution failed");

    const double scale = b.lpNorm<Eigen::Infinity>();
    const double res = (A * x - b).lpNorm<Eigen::Infinity>();
    if (scale > 0.0 && res > tol * scale)
        throw numerical_error("solve_sparse: residual above tolerance");

    return std::vector<double>(x.data(), x.data() + x.size());
}

// Column-wise M-matrix test: nonpositive off-diagonals, positive diagonal and
// weak diagonal dominance by columns.
inline bool is_column_dominant_m_matrix(const SparseMatrix& K, double tol = 1e-12) {
    Eigen::SparseMatrix<double> A = K.compressed();
    std::vector<double> diag(K.size, 0.0), offsum(K.size, 0.0);
    for (int k = 0; k < A.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
            if (it.row() == it.col()) {
                diag[it.col()] = it.value();
            } else {
                if (it.value() > tol) return false;  // positive off-diagonal
                offsum[it.col()] += std::abs(it.value());
            }
        }
    }
    for (int j = 0; j < K.size; ++j)
        if (diag[j] <= 0.0 || diag[j] + tol < offsum[j]) return false;
    return true;
}

}  // namespace tscond
