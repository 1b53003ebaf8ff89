#pragma once
//
// Executable negative results.
//
// 1. Incremental PCA (keep only the rank-k truncation after every row) can be
//    made arbitrarily bad: a strong head block followed by many identical rows
//    in a fresh direction, each too weak to displace the head on its own.
//
// 2. No row-retaining ("sparse") variant of Frequent Directions: on a hard
//    instance, removing a row while re-weighting the rest cannot both cut the
//    Frobenius mass by c*l*delta (P1) and lose at most delta in every
//    direction (P2) unless c <= 2/l.
//

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fdsketch/dense_matrix.hpp"

namespace fdsketch {

struct AdversarialStream {
    std::size_t k = 1;
    std::size_t d = 2;
    std::size_t n = 2;
    double sigma_k = 10.0;
    double tail_norm = 5.0;
    // Coordinate of the tail direction; must lie outside the head block.
    std::size_t tail_axis = 1;

    static AdversarialStream standard(std::size_t k, std::size_t d, std::size_t n);
};

/// Head rows (sigma_k + k - 1 - j) * e_j for j < k, then n - k copies of
/// tail_norm * e_{tail_axis}. Throws InvalidArgument if d <= k or n < k.
DenseMatrix gen_adversary(const AdversarialStream& layout);
DenseMatrix gen_adversary(std::size_t k, std::size_t d, std::size_t n);

/// Streams rows through truncate-to-rank-k and returns the k x d state
/// S_k V_k^T. It carries the same row space and Gram matrix as U_k S_k V_k^T.
DenseMatrix incremental_pca(const DenseMatrix& stream, std::size_t k);

struct AdversaryComparison {
    std::size_t k = 0;
    std::size_t n = 0;
    double tail_mass = 0.0;     // squared norm of the repeated rows
    double optimal_err = 0.0;   // |A - A_k|^2
    double ipca_err = 0.0;      // |A - pi_IPCA(A)|^2
    double fd_err = 0.0;        // |A - pi_{Q_k}(A)|^2
    double ipca_ratio = 0.0;
    double fd_ratio = 0.0;
};

// IPCA and FD (with the given eps) side by side on one stream.
AdversaryComparison compare_on_stream(const DenseMatrix& stream, std::size_t k, double eps);

struct SparseFdInstance {
    std::size_t ell = 0;
    std::size_t d = 0;
    DenseMatrix q;               // row j = e_0 + e_{j+1}
    std::vector<double> weights; // |row j| = sqrt(2)
    // The smallest single-row orthogonal residual as stated by the
    // construction. orthogonal_residual_min() measures the real one.
    double delta = 1.0;

    // Throws InvalidArgument unless ell >= 2 and d > ell.
    static SparseFdInstance hard(std::size_t ell, std::size_t d);
};

struct ResidualMin {
    double value = 0.0;
    std::size_t index = 0;
};

/// min over j of |Q - pi_{Q_{-j}}(Q)|_F^2 and its argmin. Row j of the
/// effective matrix is weights[j] * q_j / |q_j|; the one-argument form uses q
/// as is. Throws InvalidArgument when q has fewer than two rows.
ResidualMin orthogonal_residual_min(const DenseMatrix& q);
ResidualMin orthogonal_residual_min(const DenseMatrix& q, const std::vector<double>& weights);

struct SparseFdReport {
    bool feasible = false;  // every re-weighted w_j^2 - alpha_j >= 0
    double alpha_sum = 0.0;
    double delta = 0.0;
    double frob_reduction = 0.0;  // |Q|^2 - |Q_hat|^2
    double dir_loss = 0.0;        // |Qx|^2 - |Q_hat x|^2 along the probe direction
    double max_dir_loss = 0.0;    // the same maximized over unit x
    bool p1_satisfied = false;
    bool p2_satisfied = false;      // along the probe direction
    bool p2_all_directions = false; // for every unit x
    bool jointly_satisfied() const noexcept { return feasible && p1_satisfied && p2_satisfied; }
};

/// Removes row `removed` (default: the last) from the instance, re-weights the
/// others by w_j^2 - alpha_j, and evaluates P1 and P2 numerically. `probe`
/// defaults to e_0. alphas has one entry per kept row.
SparseFdReport sparse_fd_check(const SparseFdInstance& instance, const std::vector<double>& alphas, double c,
                               std::optional<std::size_t> removed = std::nullopt,
                               std::optional<std::vector<double>> probe = std::nullopt);

struct AlphaGridSummary {
    std::size_t ell = 0;
    double c = 0.0;
    double delta = 0.0;
    double lo = -2.0;
    double hi = 2.0;
    double step = 0.01;
    double total_points = 0.0;  // counts as doubles: (ell-1) dims of 401 points overflow u64 fast
    double p1_points = 0.0;
    double p2_points = 0.0;
    double joint_points = 0.0;
    std::optional<std::vector<double>> joint_example;
    bool alpha_zero_joint = false;  // is the all-zero alpha jointly feasible?
};

/// Scans alpha in [lo, hi]^(ell-1) on a grid of the given step. P1 and P2
/// depend on alpha only through its sum, so points are bucketed by sum and
/// one representative per bucket is run through sparse_fd_check.
AlphaGridSummary alpha_grid_feasibility(const SparseFdInstance& instance, double c, double lo = -2.0,
                                        double hi = 2.0, double step = 0.01);

}  // namespace fdsketch
