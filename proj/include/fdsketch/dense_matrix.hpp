#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fdsketch {

/// Row-major real matrix. Holds input streams, sketches, and factors.
///
/// Shape may be 0 x d (an empty stream of d-dimensional rows). Finiteness is
/// not enforced on every write; operations that require it check on entry.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    void append_row(std::span<const double> values);
    void resize_rows(std::size_t rows);

    DenseMatrix transposed() const;
    // Rows [begin, end).
    DenseMatrix row_block(std::size_t begin, std::size_t end) const;

    bool all_finite() const noexcept;
    bool is_zero() const noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);

// a * b
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
// a * b^T
DenseMatrix multiply_bt(const DenseMatrix& a, const DenseMatrix& b);
// a^T * a, d x d
DenseMatrix gram(const DenseMatrix& a);
// Stack b below a; both must have the same column count.
DenseMatrix vstack(const DenseMatrix& a, const DenseMatrix& b);

double max_abs(const DenseMatrix& a);

}  // namespace fdsketch
