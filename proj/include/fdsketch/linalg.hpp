#pragma once
//
// Dense linear algebra used throughout: thin SVD, rank-k truncation,
// row-space projection, and the directional norm gap between two matrices.
//

#include <cstddef>
#include <vector>

#include "fdsketch/dense_matrix.hpp"

namespace fdsketch {

inline constexpr double kOrthTolerance = 1e-10;
inline constexpr double kReconTolerance = 1e-10;
// Singular values of X below this fraction of the largest are treated as
// zero when projecting onto the row space of X.
inline constexpr double kPinvCutoff = 1e-12;

/// Thin SVD: a = u * diag(s) * v^T with r = min(rows, cols).
struct SvdFactors {
    DenseMatrix u;          // rows x r, orthonormal columns
    std::vector<double> s;  // r values, non-increasing, non-negative
    DenseMatrix v;          // cols x r, orthonormal columns

    std::size_t rank(double relative_cutoff = kPinvCutoff) const;
    DenseMatrix reconstruct() const;
    // Best rank-k reconstruction from these factors.
    DenseMatrix truncated(std::size_t k) const;
};

/// Thin SVD by one-sided Jacobi. Throws NonFiniteInput, InvalidArgument on an
/// empty matrix, ConvergenceError if the sweeps run out.
SvdFactors svd_thin(const DenseMatrix& a);

// U_k diag(s_1..s_k) V_k^T. k = 0 yields the zero matrix of a's shape.
DenseMatrix best_rank_k(const DenseMatrix& a, std::size_t k);

/// Orthogonal projection of each row of `a` onto the row space of `x`,
/// i.e. a x^T (x x^T)^+ x. An all-zero (or row-less) `x` projects to zero.
DenseMatrix project_rowspace(const DenseMatrix& a, const DenseMatrix& x);

// Orthonormal basis (as rows) of the row space of x, using kPinvCutoff.
DenseMatrix rowspace_basis(const DenseMatrix& x);

double frob_sq(const DenseMatrix& a);

struct DirectionalGap {
    double max_gap = 0.0;  // max over unit x of |Ax|^2 - |Qx|^2
    double min_gap = 0.0;  // min over unit x of the same
};

/// Extreme eigenvalues of A^T A - Q^T Q.
DirectionalGap directional_norm_gap_max(const DenseMatrix& a, const DenseMatrix& q);

}  // namespace fdsketch
