#pragma once

#include <cstddef>
#include <utility>

#include "fdsketch/dense_matrix.hpp"
#include "fdsketch/frequent_directions.hpp"

namespace fdsketch {

// Slack admitted on the bound checks, relative to |A|_F^2.
inline constexpr double kInequalitySlack = 1e-9;
inline constexpr double kIdentitySlack = 1e-8;

/// Every guarantee of the sketch evaluated against the exact input.
///
/// Norms are squared Frobenius norms. A_k comes from a full SVD of A that is
/// computed independently of the sketch.
struct ErrorReport {
    std::size_t k = 0;
    double eps = 0.0;
    std::size_t ell = 0;
    std::size_t capacity = 0;

    double a_frob_sq = 0.0;
    double q_frob_sq = 0.0;
    double qk_frob_sq = 0.0;
    double ak_frob_sq = 0.0;
    double tail_frob_sq = 0.0;  // |A - A_k|^2
    double delta = 0.0;

    double max_dir_gap = 0.0;
    double min_dir_gap = 0.0;

    // |A|^2 - |Q|^2 - ell * Delta. Exactly zero in exact arithmetic for c = 1;
    // for c > 1 the loss lies in [ell*Delta, m*Delta].
    double frob_identity_residual = 0.0;

    double proj_err = 0.0;  // |A - pi_{Q_k}(A)|^2
    double proj_err_ratio = 1.0;

    std::pair<double, double> qk_norm_bounds{0.0, 0.0};  // ((1-eps)|A_k|^2, |A_k|^2)
    bool lemma8_applicable = false;                      // |A - A_k| <= |A_k|

    bool eq1_upper = false;
    bool eq1_lower = false;
    bool lemma4_identity = false;
    bool lemma5 = false;
    bool lemma6 = false;
    bool sandwich_low_ok = false;   // |A - A_k|^2 <= |A|^2 - |Q_k|^2
    bool sandwich_high_ok = false;  // |A|^2 - |Q_k|^2 <= (1+eps)|A - A_k|^2
    bool lemma8_low = false;        // vacuously true when not applicable
    bool lemma8_high = false;

    bool all_pass() const noexcept {
        return eq1_upper && eq1_lower && lemma4_identity && lemma5 && lemma6 && sandwich_low_ok &&
               sandwich_high_ok && lemma8_low && lemma8_high;
    }
};

/// `a` must be exactly the rows fed to `sketch`, in any order. The sketch is
/// evaluated as if flushed.
ErrorReport fd_error_report(const DenseMatrix& a, const FdSketch& sketch);

// The loss |A|^2 - |Q|^2 checked against ell*Delta: equality for an unbatched
// sketch, the bracket [ell*Delta, m*Delta] for a batched one.
bool frob_loss_consistent(double a_frob_sq, double q_frob_sq, double delta, std::size_t ell, std::size_t capacity);

}  // namespace fdsketch
