#pragma once
//
// Jacobi-rotation engines underneath the SVD and the symmetric eigensolver.
//

#include <cstddef>
#include <vector>

#include "fdsketch/dense_matrix.hpp"

namespace fdsketch {

struct OrthogonalRows {
    // Mutually orthogonal rows spanning the same space as the input,
    // sorted by decreasing norm. rows = rotation * input.
    DenseMatrix rows;
    std::vector<double> norms;
    // Orthogonal m x m rotation; left empty unless requested.
    DenseMatrix rotation;
    std::size_t sweeps = 0;
};

// One-sided (Hestenes) Jacobi on the rows of `input`. Each rotation mixes a
// pair of rows, so the inner loops run over contiguous memory.
//
// Throws NonFiniteInput on NaN/Inf and ConvergenceError after max_sweeps.
OrthogonalRows orthogonalize_rows(DenseMatrix input, bool track_rotation = false, std::size_t max_sweeps = 60);

struct SymmetricEigen {
    std::vector<double> values;  // decreasing
    DenseMatrix vectors;         // row i is the unit eigenvector of values[i]; empty if not requested
    std::size_t sweeps = 0;
};

// Cyclic two-sided Jacobi for a symmetric matrix. Only the upper triangle is
// trusted; the lower one is overwritten from it first.
SymmetricEigen symmetric_eigen(DenseMatrix s, bool want_vectors = false, std::size_t max_sweeps = 100);

}  // namespace fdsketch
