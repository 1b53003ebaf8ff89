#include <gtest/gtest.h>

#include <cmath>

#include "fdsketch/counterexamples.hpp"
#include "fdsketch/errors.hpp"
#include "fdsketch/linalg.hpp"
#include "test_support.hpp"

using fdsketch::DenseMatrix;
using fdsketch::SparseFdInstance;

namespace {

// Residual of each row against the span of the others, with Eigen.
double eigen_residual_without(const DenseMatrix& q, std::size_t j) {
    const Eigen::MatrixXd eq = fdtest::to_eigen(q);
    Eigen::MatrixXd rest(eq.rows() - 1, eq.cols());
    for (Eigen::Index i = 0, r = 0; i < eq.rows(); ++i)
        if (i != static_cast<Eigen::Index>(j)) rest.row(r++) = eq.row(i);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(rest);
    const Eigen::MatrixXd proj = eq * (cod.pseudoInverse() * rest);
    return (eq - proj).squaredNorm();
}

}  // namespace

TEST(Adversary, SmallestStream) {
    EXPECT_EQ(fdsketch::gen_adversary(1, 2, 3), (DenseMatrix{{10, 0}, {0, 5}, {0, 5}}));
}

TEST(Adversary, HeadOnlyAndTailMass) {
    const DenseMatrix head = fdsketch::gen_adversary(2, 4, 2);
    EXPECT_EQ(head, (DenseMatrix{{11, 0, 0, 0}, {0, 10, 0, 0}}));
    const DenseMatrix a = fdsketch::gen_adversary(3, 5, 40);
    double tail = 0.0;
    for (std::size_t i = 3; i < a.rows(); ++i) tail += fdsketch::frob_sq(a.row_block(i, i + 1));
    EXPECT_EQ(tail, 25.0 * 37);
    const auto s = fdtest::oracle_singular_values(a.row_block(0, 3));
    EXPECT_NEAR(s[2], 10.0, 1e-12);
}

TEST(Adversary, Preconditions) {
    EXPECT_THROW(fdsketch::gen_adversary(2, 2, 5), fdsketch::InvalidArgument);
    EXPECT_THROW(fdsketch::gen_adversary(3, 5, 2), fdsketch::InvalidArgument);
    EXPECT_THROW(fdsketch::gen_adversary(0, 5, 2), fdsketch::InvalidArgument);
}

TEST(IncrementalPca, ExactOnLowRankStream) {
    const DenseMatrix basis = fdtest::random_matrix(2, 6, 1);
    const DenseMatrix a = fdsketch::multiply(fdtest::random_matrix(25, 2, 2), basis);
    const DenseMatrix state = fdsketch::incremental_pca(a, 2);
    EXPECT_EQ(state.rows(), 2u);
    EXPECT_LE(fdsketch::frob_sq(a - fdsketch::project_rowspace(a, state)), 1e-18 * fdsketch::frob_sq(a) + 1e-20);
}

TEST(IncrementalPca, DropsTheTailEveryStep) {
    const DenseMatrix a = fdsketch::gen_adversary(1, 2, 100);
    const DenseMatrix state = fdsketch::incremental_pca(a, 1);
    EXPECT_NEAR(std::abs(state(0, 0)), 10.0, 1e-12);
    EXPECT_NEAR(state(0, 1), 0.0, 1e-12);
}

TEST(IncrementalPca, SeparationFromFrequentDirections) {
    double previous_gap = 0.0;
    for (std::size_t n : {20u, 50u, 100u, 200u}) {
        const DenseMatrix a = fdsketch::gen_adversary(1, 2, n);
        const auto cmp = fdsketch::compare_on_stream(a, 1, 1.0);
        // Oracle: the optimal rank-1 error is the smaller of 100 and the tail mass.
        const double tail = 25.0 * static_cast<double>(n - 1);
        EXPECT_NEAR(cmp.optimal_err, fdtest::oracle_tail(a, 1), 1e-9 * fdsketch::frob_sq(a));
        EXPECT_NEAR(cmp.optimal_err, std::min(100.0, tail), 1e-9 * tail);
        EXPECT_NEAR(cmp.ipca_err, tail, 1e-9 * tail);
        EXPECT_LE(cmp.fd_ratio, 2.0);
        EXPECT_GT(cmp.ipca_ratio - cmp.fd_ratio, previous_gap);
        previous_gap = cmp.ipca_ratio - cmp.fd_ratio;
    }
}

TEST(HardInstance, Shape) {
    const auto inst = SparseFdInstance::hard(4, 6);
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_EQ(inst.q(j, 0), 1.0);
        EXPECT_EQ(inst.q(j, j + 1), 1.0);
        EXPECT_DOUBLE_EQ(fdsketch::frob_sq(inst.q.row_block(j, j + 1)), 2.0);
    }
    EXPECT_THROW(SparseFdInstance::hard(1, 3), fdsketch::InvalidArgument);
    EXPECT_THROW(SparseFdInstance::hard(4, 4), fdsketch::InvalidArgument);
}

TEST(HardInstance, ResidualMatchesIndependentOracle) {
    for (std::size_t ell = 3; ell <= 10; ++ell) {
        const auto inst = SparseFdInstance::hard(ell, ell + 2);
        const auto got = fdsketch::orthogonal_residual_min(inst.q, inst.weights);
        double oracle = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ell; ++j) oracle = std::min(oracle, eigen_residual_without(inst.q, j));
        EXPECT_NEAR(got.value, oracle, 1e-12);
        // Removing one row of e_0 + e_{j+1} leaves its component orthogonal
        // to the others: squared norm (ell + 1) / ell.
        EXPECT_NEAR(got.value, (ell + 1.0) / ell, 1e-12);
    }
}

TEST(OrthogonalResidual, DuplicateRowCostsNothing) {
    const DenseMatrix q{{1, 2, 3}, {0, 1, 0}, {1, 2, 3}};
    const auto r = fdsketch::orthogonal_residual_min(q);
    EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(OrthogonalResidual, RandomMatchesEnumeration) {
    const DenseMatrix q = fdtest::random_matrix(3, 5, 21);
    const auto r = fdsketch::orthogonal_residual_min(q);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < 3; ++j) {
        const double v = eigen_residual_without(q, j);
        if (v < best) best = v, arg = j;
    }
    EXPECT_NEAR(r.value, best, 1e-10);
    EXPECT_EQ(r.index, arg);
    EXPECT_THROW(fdsketch::orthogonal_residual_min(DenseMatrix{{1, 2}}), fdsketch::InvalidArgument);
}

TEST(SparseFdCheck, BoundaryPointAtCriticalFactor) {
    const auto inst = SparseFdInstance::hard(4, 5);
    const auto r = fdsketch::sparse_fd_check(inst, {0, 0, 0}, 0.5);
    EXPECT_TRUE(r.feasible);
    EXPECT_NEAR(r.frob_reduction, 2.0, 1e-12);
    EXPECT_NEAR(r.dir_loss, 1.0, 1e-12);
    EXPECT_TRUE(r.p1_satisfied);
    EXPECT_TRUE(r.p2_satisfied);
    EXPECT_FALSE(fdsketch::sparse_fd_check(inst, {0, 0, 0}, 1.0).jointly_satisfied());
}

TEST(SparseFdCheck, MatchesClosedFormOnRandomAlphas) {
    const auto inst = SparseFdInstance::hard(4, 5);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 200; ++t) {
        const std::vector<double> a{u(rng), u(rng), u(rng)};
        const double sum = a[0] + a[1] + a[2];
        const auto r = fdsketch::sparse_fd_check(inst, a, 1.0);
        // Removing row 4 drops mass 2 and the remaining rows lose alpha_j each.
        EXPECT_NEAR(r.frob_reduction, 2.0 + sum, 1e-12);
        // Along e_0 each kept row carries half its mass.
        EXPECT_NEAR(r.dir_loss, 1.0 + sum / 2.0, 1e-12);
        EXPECT_FALSE(r.jointly_satisfied());
    }
}

TEST(SparseFdCheck, InfeasibleAndBadArguments) {
    const auto inst = SparseFdInstance::hard(3, 4);
    EXPECT_FALSE(fdsketch::sparse_fd_check(inst, {2.5, 0}, 0.5).feasible);
    EXPECT_THROW(fdsketch::sparse_fd_check(inst, {0}, 0.5), fdsketch::InvalidArgument);
    EXPECT_THROW(fdsketch::sparse_fd_check(inst, {0, 0}, 0.5, 3), fdsketch::InvalidArgument);
}

TEST(SparseFdCheck, OtherRemovalIndicesAreSymmetric) {
    const auto inst = SparseFdInstance::hard(4, 5);
    for (std::size_t drop = 0; drop < 4; ++drop) {
        const auto r = fdsketch::sparse_fd_check(inst, {0.1, -0.2, 0.3}, 0.5, drop);
        EXPECT_NEAR(r.frob_reduction, 2.2, 1e-12);
        EXPECT_NEAR(r.dir_loss, 1.1, 1e-12);
    }
}

TEST(AlphaGrid, MatchesBruteForceEnumeration) {
    const auto inst = SparseFdInstance::hard(4, 5);
    for (double c : {0.5, 0.75, 1.0, 2.0}) {
        const auto s = fdsketch::alpha_grid_feasibility(inst, c);
        double p1 = 0, p2 = 0, joint = 0;
        for (int i = 0; i <= 400; ++i) {
            const double a0 = -2.0 + 0.01 * i;
            for (int j = 0; j <= 400; ++j) {
                const double a1 = -2.0 + 0.01 * j;
                for (int k = 0; k <= 400; ++k) {
                    const double sum = a0 + a1 + (-2.0 + 0.01 * k);
                    const bool ok1 = 2.0 + sum >= c * 4.0 - 1e-9 * 8.0;
                    const bool ok2 = 1.0 + sum / 2.0 <= 1.0 + 1e-9 * 8.0;
                    p1 += ok1;
                    p2 += ok2;
                    joint += ok1 && ok2;
                }
            }
        }
        EXPECT_EQ(s.total_points, 401.0 * 401.0 * 401.0);
        EXPECT_EQ(s.p1_points, p1) << "c = " << c;
        EXPECT_EQ(s.p2_points, p2) << "c = " << c;
        EXPECT_EQ(s.joint_points, joint) << "c = " << c;
        EXPECT_EQ(s.alpha_zero_joint, c <= 0.5);
    }
}

TEST(AlphaGrid, RejectsRangeBeyondRowMass) {
    const auto inst = SparseFdInstance::hard(4, 5);
    EXPECT_THROW(fdsketch::alpha_grid_feasibility(inst, 1.0, -2.0, 2.5), fdsketch::InvalidArgument);
}
