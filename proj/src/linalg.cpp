#include "fdsketch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdsketch/errors.hpp"
#include "fdsketch/jacobi.hpp"
#include "fdsketch/kernels.hpp"

namespace fdsketch {
namespace {

// Extends the orthonormal rows basis[0, filled) of an r x n matrix to r
// orthonormal rows, drawing candidates from the coordinate axes.
void complete_orthonormal_rows(DenseMatrix& basis, std::vector<bool> filled) {
    const std::size_t n = basis.cols();
    std::vector<double> cand(n);
    for (std::size_t slot = 0; slot < basis.rows(); ++slot) {
        if (filled[slot]) continue;
        double best_norm = -1.0;
        std::vector<double> best;
        for (std::size_t axis = 0; axis < n; ++axis) {
            std::fill(cand.begin(), cand.end(), 0.0);
            cand[axis] = 1.0;
            // Two passes of Gram-Schmidt.
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = 0; i < basis.rows(); ++i) {
                    if (!filled[i]) continue;
                    kernels::axpy(-kernels::dot(basis.row(i), cand), basis.row(i), cand);
                }
            }
            const double norm = std::sqrt(kernels::sum_sq(cand));
            if (norm > best_norm) {
                best_norm = norm;
                best = cand;
            }
            if (best_norm > 0.7) break;
        }
        kernels::scale(1.0 / best_norm, best);
        std::copy(best.begin(), best.end(), basis.row(slot).begin());
        filled[slot] = true;
    }
}

struct RowSvd {
    DenseMatrix left;   // m x m, columns are left singular vectors
    std::vector<double> s;
    DenseMatrix right_rows;  // m x n, rows are right singular vectors
};

// SVD of a short-and-wide matrix (rows <= cols).
RowSvd svd_wide(const DenseMatrix& a) {
    OrthogonalRows orth = orthogonalize_rows(a, /*track_rotation=*/true);
    const std::size_t m = a.rows();
    std::vector<bool> filled(m, false);
    DenseMatrix right = std::move(orth.rows);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = orth.norms[i];
        if (s > std::numeric_limits<double>::min()) {
            kernels::scale(1.0 / s, right.row(i));
            filled[i] = true;
        } else {
            orth.norms[i] = 0.0;
        }
    }
    complete_orthonormal_rows(right, std::move(filled));
    return {orth.rotation.transposed(), std::move(orth.norms), std::move(right)};
}

}  // namespace

std::size_t SvdFactors::rank(double relative_cutoff) const {
    if (s.empty() || s.front() == 0.0) return 0;
    const double cut = s.front() * relative_cutoff;
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v > cut; }));
}

DenseMatrix SvdFactors::reconstruct() const { return truncated(s.size()); }

DenseMatrix SvdFactors::truncated(std::size_t k) const {
    DenseMatrix out(u.rows(), v.rows());
    const DenseMatrix vt = v.transposed();
    k = std::min(k, s.size());
    for (std::size_t i = 0; i < u.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            const double coeff = u(i, j) * s[j];
            if (coeff != 0.0) kernels::axpy(coeff, vt.row(j), dst);
        }
    }
    return out;
}

SvdFactors svd_thin(const DenseMatrix& a) {
    if (a.empty()) throw InvalidArgument("svd_thin: matrix is empty");
    if (!a.all_finite()) throw NonFiniteInput("svd_thin: input has non-finite entries");

    if (a.rows() <= a.cols()) {
        RowSvd w = svd_wide(a);
        return {std::move(w.left), std::move(w.s), w.right_rows.transposed()};
    }
    // a^T = L S R  =>  a = R^T S L^T
    RowSvd w = svd_wide(a.transposed());
    return {w.right_rows.transposed(), std::move(w.s), std::move(w.left)};
}

DenseMatrix best_rank_k(const DenseMatrix& a, std::size_t k) {
    if (k == 0 || a.empty()) return DenseMatrix(a.rows(), a.cols());
    return svd_thin(a).truncated(k);
}

DenseMatrix rowspace_basis(const DenseMatrix& x) {
    if (x.empty()) return DenseMatrix(0, x.cols());
    if (!x.all_finite()) throw NonFiniteInput("rowspace_basis: input has non-finite entries");
    // Right singular vectors come straight out of the row orthogonalization.
    OrthogonalRows orth = orthogonalize_rows(x);
    const double smax = orth.norms.empty() ? 0.0 : orth.norms.front();
    DenseMatrix basis(0, x.cols());
    if (smax == 0.0) return basis;
    for (std::size_t i = 0; i < orth.rows.rows(); ++i) {
        if (orth.norms[i] <= smax * kPinvCutoff) break;
        std::vector<double> r(orth.rows.row(i).begin(), orth.rows.row(i).end());
        kernels::scale(1.0 / orth.norms[i], r);
        basis.append_row(r);
    }
    return basis;
}

DenseMatrix project_rowspace(const DenseMatrix& a, const DenseMatrix& x) {
    if (a.cols() != x.cols()) throw InvalidArgument("project_rowspace: column counts differ");
    const DenseMatrix basis = rowspace_basis(x);
    DenseMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t j = 0; j < basis.rows(); ++j) {
            kernels::axpy(kernels::dot(a.row(i), basis.row(j)), basis.row(j), dst);
        }
    }
    return out;
}

double frob_sq(const DenseMatrix& a) { return kernels::sum_sq(a.data()); }

DirectionalGap directional_norm_gap_max(const DenseMatrix& a, const DenseMatrix& q) {
    if (a.cols() != q.cols()) throw InvalidArgument("directional_norm_gap_max: column counts differ");
    if (a.cols() == 0) return {};
    const DenseMatrix gap = gram(a) - gram(q);
    const SymmetricEigen eig = symmetric_eigen(gap);
    return {eig.values.front(), eig.values.back()};
}

}  // namespace fdsketch
