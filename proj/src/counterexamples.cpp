#include "fdsketch/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdsketch/errors.hpp"
#include "fdsketch/frequent_directions.hpp"
#include "fdsketch/jacobi.hpp"
#include "fdsketch/kernels.hpp"
#include "fdsketch/linalg.hpp"

namespace fdsketch {

AdversarialStream AdversarialStream::standard(std::size_t k, std::size_t d, std::size_t n) {
    AdversarialStream s;
    s.k = k;
    s.d = d;
    s.n = n;
    s.tail_axis = k;
    return s;
}

DenseMatrix gen_adversary(const AdversarialStream& layout) {
    if (layout.k == 0) throw InvalidArgument("adversary: k must be at least 1");
    if (layout.d <= layout.k) throw InvalidArgument("adversary: need d > k for a direction outside the head block");
    if (layout.n < layout.k) throw InvalidArgument("adversary: need n >= k");
    if (layout.tail_axis < layout.k || layout.tail_axis >= layout.d) {
        throw InvalidArgument("adversary: tail axis must be outside the head block");
    }
    DenseMatrix rows(layout.n, layout.d);
    for (std::size_t j = 0; j < layout.k; ++j) rows(j, j) = layout.sigma_k + static_cast<double>(layout.k - 1 - j);
    for (std::size_t i = layout.k; i < layout.n; ++i) rows(i, layout.tail_axis) = layout.tail_norm;
    return rows;
}

DenseMatrix gen_adversary(std::size_t k, std::size_t d, std::size_t n) {
    return gen_adversary(AdversarialStream::standard(k, d, n));
}

DenseMatrix incremental_pca(const DenseMatrix& stream, std::size_t k) {
    if (k == 0) throw InvalidArgument("incremental_pca: k must be at least 1");
    const std::size_t d = stream.cols();
    DenseMatrix state(0, d);
    for (std::size_t i = 0; i < stream.rows(); ++i) {
        DenseMatrix stacked = state;
        stacked.append_row(stream.row(i));
        // Orthogonalized rows are s_j v_j^T, sorted; keep the top k nonzero.
        const OrthogonalRows orth = orthogonalize_rows(std::move(stacked));
        state = DenseMatrix(0, d);
        for (std::size_t j = 0; j < std::min(k, orth.rows.rows()); ++j) {
            if (orth.norms[j] == 0.0) break;
            state.append_row(orth.rows.row(j));
        }
    }
    state.resize_rows(k);
    return state;
}

namespace {

double projection_error(const DenseMatrix& a, const DenseMatrix& basis_rows) {
    return frob_sq(a - project_rowspace(a, basis_rows));
}

double safe_ratio(double err, double optimal, double scale) {
    const double negligible = 1e-12 * scale;
    if (optimal > negligible) return err / optimal;
    return err <= negligible ? 1.0 : err / std::max(negligible, std::numeric_limits<double>::min());
}

}  // namespace

AdversaryComparison compare_on_stream(const DenseMatrix& stream, std::size_t k, double eps) {
    if (stream.rows() == 0) throw InvalidArgument("compare_on_stream: empty stream");
    AdversaryComparison out;
    out.k = k;
    out.n = stream.rows();
    for (std::size_t i = k; i < stream.rows(); ++i) out.tail_mass += kernels::sum_sq(stream.row(i));

    const SvdFactors oracle = svd_thin(stream);
    for (std::size_t i = k; i < oracle.s.size(); ++i) out.optimal_err += oracle.s[i] * oracle.s[i];

    out.ipca_err = projection_error(stream, incremental_pca(stream, k));

    FdSketch fd(FdParams::from_error(k, eps, 1.0, stream.cols()));
    fd.append_rows(stream);
    out.fd_err = projection_error(stream, fd.query_topk());

    const double scale = frob_sq(stream);
    out.ipca_ratio = safe_ratio(out.ipca_err, out.optimal_err, scale);
    out.fd_ratio = safe_ratio(out.fd_err, out.optimal_err, scale);
    return out;
}

SparseFdInstance SparseFdInstance::hard(std::size_t ell, std::size_t d) {
    if (ell < 2) throw InvalidArgument("hard instance: need ell >= 2");
    if (d <= ell) throw InvalidArgument("hard instance: need d > ell");
    SparseFdInstance inst;
    inst.ell = ell;
    inst.d = d;
    inst.q = DenseMatrix(ell, d);
    for (std::size_t j = 0; j < ell; ++j) {
        inst.q(j, 0) = 1.0;
        inst.q(j, j + 1) = 1.0;
    }
    inst.weights.assign(ell, std::sqrt(2.0));
    inst.delta = 1.0;
    return inst;
}

namespace {

DenseMatrix weighted_rows(const DenseMatrix& q, const std::vector<double>& weights) {
    if (weights.size() != q.rows()) throw InvalidArgument("one weight per row is required");
    DenseMatrix out = q;
    for (std::size_t j = 0; j < q.rows(); ++j) {
        const double norm = std::sqrt(kernels::sum_sq(q.row(j)));
        if (norm == 0.0) {
            if (weights[j] != 0.0) throw InvalidArgument("cannot weight a zero row");
            continue;
        }
        kernels::scale(weights[j] / norm, out.row(j));
    }
    return out;
}

DenseMatrix without_row(const DenseMatrix& q, std::size_t j) {
    DenseMatrix out(0, q.cols());
    for (std::size_t i = 0; i < q.rows(); ++i)
        if (i != j) out.append_row(q.row(i));
    return out;
}

}  // namespace

ResidualMin orthogonal_residual_min(const DenseMatrix& q) {
    if (q.rows() < 2) throw InvalidArgument("orthogonal_residual_min: need at least two rows");
    ResidualMin best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t j = 0; j < q.rows(); ++j) {
        const double residual = frob_sq(q - project_rowspace(q, without_row(q, j)));
        if (residual < best.value) best = {residual, j};
    }
    return best;
}

ResidualMin orthogonal_residual_min(const DenseMatrix& q, const std::vector<double>& weights) {
    return orthogonal_residual_min(weighted_rows(q, weights));
}

SparseFdReport sparse_fd_check(const SparseFdInstance& instance, const std::vector<double>& alphas, double c,
                               std::optional<std::size_t> removed, std::optional<std::vector<double>> probe) {
    const std::size_t ell = instance.q.rows();
    const std::size_t d = instance.q.cols();
    const std::size_t drop = removed.value_or(ell - 1);
    if (drop >= ell) throw InvalidArgument("sparse_fd_check: removed row out of range");
    if (alphas.size() + 1 != ell) {
        throw InvalidArgument("sparse_fd_check: need " + std::to_string(ell - 1) + " alphas");
    }
    std::vector<double> x = probe.value_or(std::vector<double>{});
    if (x.empty()) {
        x.assign(d, 0.0);
        x[0] = 1.0;
    }
    if (x.size() != d) throw InvalidArgument("sparse_fd_check: probe has the wrong length");
    kernels::scale(1.0 / std::sqrt(kernels::sum_sq(x)), x);

    const DenseMatrix q = weighted_rows(instance.q, instance.weights);

    // Q_hat^T Q_hat = sum_j (w_j^2 - alpha_j) rbar_j rbar_j^T over the kept rows.
    // Written as a quadratic form it stays defined for infeasible alphas too.
    SparseFdReport r;
    r.delta = instance.delta;
    r.feasible = true;
    DenseMatrix gram_hat(d, d);
    double frob_hat = 0.0;
    double dir_hat = 0.0;
    std::size_t a = 0;
    for (std::size_t j = 0; j < ell; ++j) {
        if (j == drop) continue;
        const double w2 = instance.weights[j] * instance.weights[j];
        const double w2_hat = w2 - alphas[a];
        r.alpha_sum += alphas[a];
        ++a;
        if (w2_hat < 0.0) r.feasible = false;
        std::vector<double> unit(instance.q.row(j).begin(), instance.q.row(j).end());
        kernels::scale(1.0 / std::sqrt(kernels::sum_sq(unit)), unit);
        frob_hat += w2_hat;
        const double proj = kernels::dot(unit, x);
        dir_hat += w2_hat * proj * proj;
        for (std::size_t i = 0; i < d; ++i) {
            if (unit[i] != 0.0) kernels::axpy(w2_hat * unit[i], unit, gram_hat.row(i));
        }
    }

    const double frob_q = frob_sq(q);
    double dir_q = 0.0;
    for (std::size_t j = 0; j < ell; ++j) {
        const double p = kernels::dot(q.row(j), x);
        dir_q += p * p;
    }
    const double tol = 1e-9 * std::max(1.0, frob_q);

    r.frob_reduction = frob_q - frob_hat;
    r.dir_loss = dir_q - dir_hat;
    r.max_dir_loss = symmetric_eigen(gram(q) - gram_hat).values.front();
    r.p1_satisfied = r.frob_reduction >= c * static_cast<double>(ell) * r.delta - tol;
    r.p2_satisfied = r.dir_loss <= r.delta + tol;
    r.p2_all_directions = r.max_dir_loss <= r.delta + tol;
    return r;
}

AlphaGridSummary alpha_grid_feasibility(const SparseFdInstance& instance, double c, double lo, double hi,
                                        double step) {
    const std::size_t ell = instance.q.rows();
    if (ell < 2) throw InvalidArgument("alpha grid: need ell >= 2");
    if (!(step > 0.0) || !(hi >= lo)) throw InvalidArgument("alpha grid: need step > 0 and hi >= lo");

    // Bucketing by sum is exact only while every grid point is feasible.
    const double min_w2 = std::pow(*std::min_element(instance.weights.begin(), instance.weights.end()), 2);
    if (hi > min_w2) throw InvalidArgument("alpha grid: hi must not exceed the smallest squared weight");

    const std::size_t dims = ell - 1;
    const auto points = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;

    // count[t] = number of grid points whose index sum is t.
    std::vector<double> count{1.0};
    for (std::size_t dim = 0; dim < dims; ++dim) {
        std::vector<double> next(count.size() + points - 1, 0.0);
        double window = 0.0;
        for (std::size_t t = 0; t < next.size(); ++t) {
            if (t < count.size()) window += count[t];
            if (t >= points) window -= count[t - points];
            next[t] = window;
        }
        count = std::move(next);
    }

    AlphaGridSummary s;
    s.ell = ell;
    s.c = c;
    s.delta = instance.delta;
    s.lo = lo;
    s.hi = hi;
    s.step = step;
    s.total_points = std::pow(static_cast<double>(points), static_cast<double>(dims));

    std::vector<double> alphas(dims);
    for (std::size_t t = 0; t < count.size(); ++t) {
        if (count[t] == 0.0) continue;
        // A concrete grid point with index sum t.
        std::size_t remaining = t;
        for (std::size_t j = 0; j < dims; ++j) {
            const std::size_t idx = std::min(remaining, points - 1);
            alphas[j] = lo + static_cast<double>(idx) * step;
            remaining -= idx;
        }
        const SparseFdReport rep = sparse_fd_check(instance, alphas, c);
        if (!rep.feasible) continue;
        if (rep.p1_satisfied) s.p1_points += count[t];
        if (rep.p2_satisfied) s.p2_points += count[t];
        if (rep.jointly_satisfied()) {
            s.joint_points += count[t];
            if (!s.joint_example) s.joint_example = alphas;
        }
    }

    s.alpha_zero_joint = sparse_fd_check(instance, std::vector<double>(dims, 0.0), c).jointly_satisfied();
    return s;
}

}  // namespace fdsketch
