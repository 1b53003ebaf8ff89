#pragma once
// Shared helpers for the test binaries. Eigen is used only here, as an
// oracle that shares no code with the library's own factorizations.

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "fdsketch/dense_matrix.hpp"

namespace fdtest {

inline fdsketch::DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    fdsketch::DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = normal(rng);
    return m;
}

inline Eigen::MatrixXd to_eigen(const fdsketch::DenseMatrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

// Eigenvalues of A^T A - Q^T Q, ascending.
inline Eigen::VectorXd gap_eigenvalues(const fdsketch::DenseMatrix& a, const fdsketch::DenseMatrix& q) {
    const Eigen::MatrixXd ea = to_eigen(a);
    const Eigen::MatrixXd eq = to_eigen(q);
    Eigen::MatrixXd gap = ea.transpose() * ea - eq.transpose() * eq;
    gap = 0.5 * (gap + gap.transpose());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gap, Eigen::EigenvaluesOnly).eigenvalues();
}

// Squared singular values of A, descending, from Eigen's SVD.
inline Eigen::VectorXd oracle_singular_values(const fdsketch::DenseMatrix& a) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(a)).singularValues();
}

// |A - A_k|_F^2 from Eigen.
inline double oracle_tail(const fdsketch::DenseMatrix& a, std::size_t k) {
    const Eigen::VectorXd s = oracle_singular_values(a);
    double t = 0.0;
    for (Eigen::Index i = static_cast<Eigen::Index>(k); i < s.size(); ++i) t += s[i] * s[i];
    return t;
}

// |A - A Q^+ Q|_F^2 with Eigen's complete orthogonal decomposition.
inline double oracle_projection_error(const fdsketch::DenseMatrix& a, const fdsketch::DenseMatrix& q) {
    const Eigen::MatrixXd ea = to_eigen(a);
    const Eigen::MatrixXd eq = to_eigen(q);
    if (eq.rows() == 0) return ea.squaredNorm();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(eq);
    cod.setThreshold(1e-12);
    const Eigen::MatrixXd proj = ea * (cod.pseudoInverse() * eq);
    return (ea - proj).squaredNorm();
}

}  // namespace fdtest
