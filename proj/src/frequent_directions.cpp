#include "fdsketch/frequent_directions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fdsketch/errors.hpp"
#include "fdsketch/jacobi.hpp"
#include "fdsketch/kernels.hpp"

namespace fdsketch {

FdParams FdParams::from_error(std::size_t k, double eps, double c, std::size_t d) {
    if (k < 1) throw InvalidArgument("k must be at least 1");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be a positive finite number");
    if (!(c >= 1.0) || !std::isfinite(c)) throw InvalidArgument("batch factor c must be >= 1");
    if (d < 1) throw InvalidArgument("d must be at least 1");
    FdParams p;
    p.k = k;
    p.eps = eps;
    p.ell = snapped_ceil(static_cast<double>(k) + static_cast<double>(k) / eps);
    p.c = c;
    p.capacity = std::max(p.ell, snapped_ceil(c * static_cast<double>(p.ell)));
    p.d = d;
    return p;
}

FdParams FdParams::from_layout(std::size_t k, double eps, std::size_t ell, std::size_t capacity, std::size_t d) {
    if (k < 1) throw InvalidArgument("k must be at least 1");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be a positive finite number");
    if (ell <= k) throw InvalidArgument("ell must exceed k");
    if (capacity < ell) throw InvalidArgument("buffer capacity must be at least ell");
    if (d < 1) throw InvalidArgument("d must be at least 1");
    FdParams p;
    p.k = k;
    p.eps = eps;
    p.ell = ell;
    p.c = static_cast<double>(capacity) / static_cast<double>(ell);
    p.capacity = capacity;
    p.d = d;
    return p;
}

FdSketch::FdSketch(FdParams params) : params_(params), buffer_(params.capacity, params.d) {}

FdSketch FdSketch::restore(FdParams params, DenseMatrix buffer, double delta, double input_frob_sq,
                           std::uint64_t rows_seen) {
    if (buffer.rows() != params.capacity || buffer.cols() != params.d) {
        throw InvalidArgument("restore: buffer shape does not match sketch parameters");
    }
    if (!buffer.all_finite() || !std::isfinite(delta) || !std::isfinite(input_frob_sq)) {
        throw NonFiniteInput("restore: non-finite sketch state");
    }
    if (delta < 0.0 || input_frob_sq < 0.0) throw InvalidArgument("restore: negative shrink or input mass");

    std::size_t occupied = buffer.rows();
    while (occupied > 0) {
        const auto r = buffer.row(occupied - 1);
        if (std::any_of(r.begin(), r.end(), [](double v) { return v != 0.0; })) break;
        --occupied;
    }
    if (occupied >= params.ell) {
        throw InvalidArgument("restore: buffer holds " + std::to_string(occupied) +
                              " nonzero rows, a compressed sketch holds at most " + std::to_string(params.ell - 1));
    }

    FdSketch s(params);
    s.buffer_ = std::move(buffer);
    s.occupied_ = occupied;
    s.delta_ = delta;
    s.input_frob_sq_ = CompensatedSum(input_frob_sq);
    s.rows_seen_ = rows_seen;
    return s;
}

void FdSketch::place_row(std::span<const double> row) {
    if (occupied_ == params_.capacity) compress();
    std::copy(row.begin(), row.end(), buffer_.row(occupied_).begin());
    ++occupied_;
    ++pending_;
    if (params_.capacity == params_.ell || occupied_ == params_.capacity) compress();
}

void FdSketch::append(std::span<const double> row) {
    if (row.size() != params_.d) {
        throw InvalidArgument("row has " + std::to_string(row.size()) + " entries, sketch expects " +
                              std::to_string(params_.d));
    }
    if (!std::all_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); })) {
        throw NonFiniteInput("row contains NaN or Inf");
    }
    input_frob_sq_.add(kernels::sum_sq(row));
    ++rows_seen_;
    place_row(row);
}

void FdSketch::append_rows(const DenseMatrix& rows) {
    for (std::size_t i = 0; i < rows.rows(); ++i) append(rows.row(i));
}

void FdSketch::compress() {
    pending_ = 0;
    if (occupied_ == 0) return;

    const std::size_t ell = params_.ell;
    DenseMatrix before = buffer_.row_block(0, occupied_);
    const OrthogonalRows orth = orthogonalize_rows(before);

    const double shrink = occupied_ >= ell ? orth.norms[ell - 1] * orth.norms[ell - 1] : 0.0;

    std::fill(buffer_.data().begin(), buffer_.data().end(), 0.0);
    std::size_t kept = 0;
    for (std::size_t j = 0; j < occupied_ && j + 1 < ell; ++j) {
        const double s = orth.norms[j];
        // s^2 - delta can round below zero; it is zero in exact arithmetic.
        const double shrunk_sq = std::max(s * s - shrink, 0.0);
        if (shrunk_sq == 0.0) break;
        auto dst = buffer_.row(j);
        const auto src = orth.rows.row(j);
        std::copy(src.begin(), src.end(), dst.begin());
        kernels::scale(std::sqrt(shrunk_sq) / s, dst);
        kept = j + 1;
    }
    occupied_ = kept;
    delta_ += shrink;
    ++compressions_;

    if (observer_) observer_(CompressionEvent{before, buffer_, shrink});
}

void FdSketch::flush() {
    if (pending_ > 0) compress();
}

FdSketch FdSketch::flushed() const {
    FdSketch copy = *this;
    copy.observer_ = nullptr;
    copy.flush();
    return copy;
}

DenseMatrix FdSketch::query() const {
    if (pending_ > 0) return flushed().buffer_.row_block(0, params_.ell);
    return buffer_.row_block(0, params_.ell);
}

DenseMatrix FdSketch::query_topk() const {
    const DenseMatrix q = query();
    return q.row_block(0, params_.k);
}

void FdSketch::merge(const FdSketch& other) {
    if (!params_.compatible_with(other.params_)) {
        throw InvalidArgument("cannot merge sketches with different (k, eps, ell, d)");
    }
    const FdSketch src = other.flushed();
    for (std::size_t i = 0; i < src.occupied_; ++i) place_row(src.buffer_.row(i));
    delta_ += src.delta_;
    input_frob_sq_.add(src.input_frob_sq());
    rows_seen_ += src.rows_seen_;
    flush();
}

bool FdSketch::same_state(const FdSketch& other) const {
    auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v); };
    const auto& a = params_;
    const auto& b = other.params_;
    if (a.k != b.k || bits(a.eps) != bits(b.eps) || a.ell != b.ell || a.capacity != b.capacity || a.d != b.d) {
        return false;
    }
    if (bits(delta_) != bits(other.delta_) || bits(input_frob_sq()) != bits(other.input_frob_sq()) ||
        rows_seen_ != other.rows_seen_) {
        return false;
    }
    const auto x = buffer_.data();
    const auto y = other.buffer_.data();
    return x.size() == y.size() &&
           std::equal(x.begin(), x.end(), y.begin(), [&](double p, double q) { return bits(p) == bits(q); });
}

FdSketch fd_merge(const FdSketch& a, const FdSketch& b) {
    FdSketch out = a;
    out.set_observer(nullptr);
    out.merge(b);
    return out;
}

FdSketch fd_tree_sketch(const DenseMatrix& rows, const FdParams& params, std::size_t shards) {
    if (shards == 0) throw InvalidArgument("shard count must be at least 1");
    std::vector<FdSketch> level;
    const std::size_t n = rows.rows();
    for (std::size_t s = 0; s < shards; ++s) {
        const std::size_t begin = n * s / shards;
        const std::size_t end = n * (s + 1) / shards;
        FdSketch sk(params);
        for (std::size_t i = begin; i < end; ++i) sk.append(rows.row(i));
        level.push_back(std::move(sk));
    }
    while (level.size() > 1) {
        std::vector<FdSketch> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(fd_merge(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
        level = std::move(next);
    }
    return std::move(level.front());
}

}  // namespace fdsketch
