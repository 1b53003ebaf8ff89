#include "fdsketch/error_report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdsketch/errors.hpp"
#include "fdsketch/linalg.hpp"

namespace fdsketch {

bool frob_loss_consistent(double a_frob_sq, double q_frob_sq, double delta, std::size_t ell, std::size_t capacity) {
    const double loss = a_frob_sq - q_frob_sq;
    const double slack = kIdentitySlack * a_frob_sq;
    const double lo = static_cast<double>(ell) * delta;
    if (capacity == ell) return std::abs(loss - lo) <= slack;
    const double hi = static_cast<double>(capacity) * delta;
    return loss >= lo - slack && loss <= hi + slack;
}

ErrorReport fd_error_report(const DenseMatrix& a, const FdSketch& sketch) {
    const FdParams& p = sketch.params();
    if (a.cols() != p.d) throw InvalidArgument("fd_error_report: input and sketch dimensions differ");

    const FdSketch s = sketch.flushed();
    const DenseMatrix q = s.query();
    const DenseMatrix qk = s.query_topk();

    ErrorReport r;
    r.k = p.k;
    r.eps = p.eps;
    r.ell = p.ell;
    r.capacity = p.capacity;
    r.delta = s.delta();
    r.a_frob_sq = frob_sq(a);
    r.q_frob_sq = frob_sq(q);
    r.qk_frob_sq = frob_sq(qk);

    if (a.rows() > 0) {
        const SvdFactors oracle = svd_thin(a);
        for (std::size_t i = 0; i < oracle.s.size(); ++i) {
            const double sq = oracle.s[i] * oracle.s[i];
            (i < p.k ? r.ak_frob_sq : r.tail_frob_sq) += sq;
        }
    }

    const DirectionalGap gap = directional_norm_gap_max(a, q);
    r.max_dir_gap = gap.max_gap;
    r.min_dir_gap = gap.min_gap;

    r.frob_identity_residual = r.a_frob_sq - r.q_frob_sq - static_cast<double>(p.ell) * r.delta;

    if (a.rows() > 0) r.proj_err = frob_sq(a - project_rowspace(a, qk));
    const double negligible = 1e-12 * r.a_frob_sq;
    if (r.tail_frob_sq > negligible) {
        r.proj_err_ratio = r.proj_err / r.tail_frob_sq;
    } else if (r.proj_err <= negligible) {
        r.proj_err_ratio = 1.0;
    } else {
        // Optimal error vanishes but the sketch's does not; keep it finite.
        r.proj_err_ratio = r.proj_err / std::max(negligible, std::numeric_limits<double>::min());
    }

    const double slack = kInequalitySlack * r.a_frob_sq;
    const double ell = static_cast<double>(p.ell);
    const double spare = static_cast<double>(p.ell - p.k);

    r.eq1_upper = r.max_dir_gap <= r.a_frob_sq / ell + slack;
    r.eq1_lower = r.min_dir_gap >= -slack;
    r.lemma4_identity = frob_loss_consistent(r.a_frob_sq, r.q_frob_sq, r.delta, p.ell, p.capacity);
    r.lemma5 = r.delta <= r.tail_frob_sq / spare + slack;
    r.lemma6 = r.proj_err <= (1.0 + p.eps) * r.tail_frob_sq + slack;
    r.sandwich_low_ok = r.tail_frob_sq <= r.a_frob_sq - r.qk_frob_sq + slack;
    r.sandwich_high_ok = r.a_frob_sq - r.qk_frob_sq <= (1.0 + p.eps) * (r.a_frob_sq - r.ak_frob_sq) + slack;

    r.qk_norm_bounds = {(1.0 - p.eps) * r.ak_frob_sq, r.ak_frob_sq};
    r.lemma8_applicable = r.tail_frob_sq <= r.ak_frob_sq;
    if (r.lemma8_applicable) {
        r.lemma8_low = r.qk_norm_bounds.first <= r.qk_frob_sq + slack;
        r.lemma8_high = r.qk_frob_sq <= r.qk_norm_bounds.second + slack;
    } else {
        r.lemma8_low = r.lemma8_high = true;
    }
    return r;
}

}  // namespace fdsketch
