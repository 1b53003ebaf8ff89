#pragma once
//
// Frequent Directions: a deterministic l x d streaming sketch Q of a row
// stream A such that, for every unit x,
//
//     0 <= |Ax|^2 - |Qx|^2 <= |A|_F^2 / l.
//
// With l = ceil(k + k/eps) the top-k rows of Q also give a (1+eps)
// relative-error rank-k projection.
//
// A buffer of m = ceil(c*l) rows is kept. With c = 1 every appended row is
// followed by one SVD-and-shrink step. With c > 1 rows are buffered until no
// free row is left, and a compression then zeroes at least m - l + 1 rows.
//

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fdsketch/dense_matrix.hpp"
#include "fdsketch/numeric.hpp"

namespace fdsketch {

struct FdParams {
    std::size_t k = 1;
    double eps = 1.0;
    std::size_t ell = 2;       // logical sketch rows
    double c = 1.0;            // batching factor
    std::size_t capacity = 2;  // buffer rows m = ceil(c * ell)
    std::size_t d = 1;

    /// ell = ceil(k + k/eps), capacity = ceil(c * ell).
    /// Throws InvalidArgument unless k >= 1, eps > 0, c >= 1, d >= 1.
    static FdParams from_error(std::size_t k, double eps, double c, std::size_t d);

    /// Explicit layout, e.g. when reading a sketch file. Requires ell > k and
    /// capacity >= ell.
    static FdParams from_layout(std::size_t k, double eps, std::size_t ell, std::size_t capacity, std::size_t d);

    // ell > d is legal; shrinking then never kicks in until rank saturates.
    bool ell_exceeds_dimension() const noexcept { return ell > d; }

    bool batched() const noexcept { return capacity > ell; }

    // Two sketches can be merged iff these agree.
    bool compatible_with(const FdParams& other) const noexcept {
        return k == other.k && eps == other.eps && ell == other.ell && d == other.d;
    }
};

// Handed to a compression observer: the buffer before the shrink (C^i in the
// analysis), the buffer after it, and the shrink amount.
struct CompressionEvent {
    const DenseMatrix& before;
    const DenseMatrix& after;
    double delta;
};

class FdSketch {
public:
    using Observer = std::function<void(const CompressionEvent&)>;

    explicit FdSketch(FdParams params);

    // Rebuilds a sketch from serialized state. The buffer must be compressed:
    // nonzero rows form a prefix of at most ell - 1 rows.
    static FdSketch restore(FdParams params, DenseMatrix buffer, double delta, double input_frob_sq,
                            std::uint64_t rows_seen);

    const FdParams& params() const noexcept { return params_; }

    /// Appends one input row. Throws InvalidArgument on a length mismatch and
    /// NonFiniteInput on NaN/Inf, leaving the sketch untouched.
    void append(std::span<const double> row);
    void append_rows(const DenseMatrix& rows);

    /// SVD-and-shrink of the occupied buffer rows. delta is the l-th largest
    /// squared singular value (zero when fewer than l rows are occupied).
    void compress();

    // Compresses iff rows were appended since the last compression.
    void flush();
    FdSketch flushed() const;

    /// Current l x d sketch, as it would be after a flush.
    DenseMatrix query() const;
    /// Top-k rows of the flushed sketch: the best rank-k approximation of Q.
    DenseMatrix query_topk() const;

    const DenseMatrix& buffer() const noexcept { return buffer_; }
    std::size_t occupied_rows() const noexcept { return occupied_; }
    std::size_t pending_rows() const noexcept { return pending_; }
    double delta() const noexcept { return delta_; }
    double input_frob_sq() const { return input_frob_sq_.value(); }
    std::uint64_t rows_seen() const noexcept { return rows_seen_; }
    std::size_t compressions() const noexcept { return compressions_; }

    // Called after every compression. Intended for instrumented checks.
    void set_observer(Observer observer) { observer_ = std::move(observer); }

    /// Mergeable-summary combine: the rows of the other sketch's flushed Q are
    /// fed through this sketch's compression. Input mass, row counts and the
    /// shrink budgets add. Throws InvalidArgument on incompatible params.
    void merge(const FdSketch& other);

    // Same observable state: params layout, buffer, delta, input mass, rows seen.
    bool same_state(const FdSketch& other) const;

private:
    void place_row(std::span<const double> row);

    FdParams params_;
    DenseMatrix buffer_;
    std::size_t occupied_ = 0;  // rows [0, occupied_) are in use
    std::size_t pending_ = 0;   // rows placed since the last compression
    double delta_ = 0.0;
    CompensatedSum input_frob_sq_;
    std::uint64_t rows_seen_ = 0;
    std::size_t compressions_ = 0;
    Observer observer_;
};

FdSketch fd_merge(const FdSketch& a, const FdSketch& b);

// Sketches `rows` in `shards` contiguous pieces and merges them pairwise as a
// balanced tree. shards = 1 is a plain single-stream sketch.
FdSketch fd_tree_sketch(const DenseMatrix& rows, const FdParams& params, std::size_t shards);

}  // namespace fdsketch
