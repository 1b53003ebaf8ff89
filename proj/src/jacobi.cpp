#include "fdsketch/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fdsketch/errors.hpp"
#include "fdsketch/kernels.hpp"

namespace fdsketch {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Rotation {
    double c;
    double s;
};

// Rotation that zeroes the (p, q) coupling given diagonal entries app, aqq and
// coupling apq. Smaller-angle root, which keeps the iteration stable.
Rotation jacobi_rotation(double app, double aqq, double apq) {
    const double zeta = (aqq - app) / (2.0 * apq);
    const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, c * t};
}

std::vector<std::size_t> order_by_decreasing(const std::vector<double>& keys) {
    std::vector<std::size_t> idx(keys.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
    return idx;
}

DenseMatrix permute_rows(const DenseMatrix& m, const std::vector<std::size_t>& order) {
    DenseMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto src = m.row(order[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

}  // namespace

OrthogonalRows orthogonalize_rows(DenseMatrix input, bool track_rotation, std::size_t max_sweeps) {
    if (!input.all_finite()) throw NonFiniteInput("orthogonalize_rows: input has non-finite entries");

    const std::size_t m = input.rows();
    const std::size_t n = input.cols();
    const double tol = kEps * std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)));

    DenseMatrix rotation = track_rotation ? DenseMatrix::identity(m) : DenseMatrix();

    std::size_t sweep = 0;
    bool converged = m < 2;
    double worst = 0.0;
    while (!converged) {
        if (sweep == max_sweeps) {
            throw ConvergenceError("one-sided Jacobi did not converge", worst);
        }
        ++sweep;
        bool rotated = false;
        worst = 0.0;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const kernels::Gram2 g = kernels::gram2(input.row(p), input.row(q));
                if (g.xx <= kTiny || g.yy <= kTiny) continue;
                const double scale = std::sqrt(g.xx) * std::sqrt(g.yy);
                const double rel = std::abs(g.xy) / scale;
                worst = std::max(worst, rel);
                if (rel <= tol) continue;
                const Rotation r = jacobi_rotation(g.xx, g.yy, g.xy);
                kernels::rotate(r.c, r.s, input.row(p), input.row(q));
                if (track_rotation) kernels::rotate(r.c, r.s, rotation.row(p), rotation.row(q));
                rotated = true;
            }
        }
        converged = !rotated;
    }

    std::vector<double> norms(m);
    for (std::size_t i = 0; i < m; ++i) norms[i] = std::sqrt(kernels::sum_sq(input.row(i)));
    const auto order = order_by_decreasing(norms);

    OrthogonalRows out;
    out.rows = permute_rows(input, order);
    out.norms.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.norms[i] = norms[order[i]];
    if (track_rotation) out.rotation = permute_rows(rotation, order);
    out.sweeps = sweep;
    return out;
}

SymmetricEigen symmetric_eigen(DenseMatrix s, bool want_vectors, std::size_t max_sweeps) {
    if (s.rows() != s.cols()) throw InvalidArgument("symmetric_eigen: matrix is not square");
    if (!s.all_finite()) throw NonFiniteInput("symmetric_eigen: input has non-finite entries");

    const std::size_t n = s.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s(j, i) = s(i, j);

    DenseMatrix vt = want_vectors ? DenseMatrix::identity(n) : DenseMatrix();

    double total = 0.0;
    for (double v : s.data()) total += v * v;
    const double target = kEps * std::sqrt(total);

    auto off_norm = [&] {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * s(i, j) * s(i, j);
        return std::sqrt(off);
    };

    std::size_t sweep = 0;
    for (double off = off_norm(); off > target && total > 0.0; off = off_norm()) {
        if (sweep == max_sweeps) throw ConvergenceError("symmetric Jacobi did not converge", off);
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (std::abs(apq) <= kTiny) continue;
                // Skip couplings already negligible against both diagonals.
                if (std::abs(apq) <= kEps * 0.5 * std::sqrt(std::abs(s(p, p) * s(q, q)))) {
                    s(p, q) = s(q, p) = 0.0;
                    continue;
                }
                const Rotation r = jacobi_rotation(s(p, p), s(q, q), apq);
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = s(i, p);
                    const double aiq = s(i, q);
                    s(i, p) = r.c * aip - r.s * aiq;
                    s(i, q) = r.s * aip + r.c * aiq;
                }
                kernels::rotate(r.c, r.s, s.row(p), s.row(q));
                s(p, q) = s(q, p) = 0.0;
                if (want_vectors) kernels::rotate(r.c, r.s, vt.row(p), vt.row(q));
            }
        }
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = s(i, i);
    const auto order = order_by_decreasing(diag);

    SymmetricEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = diag[order[i]];
    if (want_vectors) out.vectors = permute_rows(vt, order);
    out.sweeps = sweep;
    return out;
}

}  // namespace fdsketch
