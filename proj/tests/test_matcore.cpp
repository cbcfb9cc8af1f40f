#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <gtest/gtest.h>

#include "mmf/dataio.hpp"
#include "mmf/matcore.hpp"
#include "mmf/random.hpp"

using namespace mmf;

namespace {

double max_abs(const DenseMatrix &M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

SquareMatrix rand_sparse(index_t n, double density, std::uint64_t seed)
{
    Rng                rng(seed);
    std::vector<Entry> e;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            if (rng.uniform() < density)
                e.push_back({i, j, rng.normal()});
    return SquareMatrix::sparse(n, e);
}

}// namespace

TEST(SquareMatrix, SparseDropsZerosAndSorts)
{
    const auto A = SquareMatrix::sparse(3, {{2, 0, 1.0}, {0, 1, 0.0}, {0, 2, 3.0}});
    EXPECT_EQ(A.nnz(), 2u);
    const auto e = A.entries();
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0], (Entry{0, 2, 3.0}));
    EXPECT_EQ(e[1], (Entry{2, 0, 1.0}));
}

TEST(SquareMatrix, RejectsDuplicatesRangeAndNonFinite)
{
    EXPECT_THROW(SquareMatrix::sparse(2, {{0, 0, 1.0}, {0, 0, 2.0}}), std::invalid_argument);
    EXPECT_THROW(SquareMatrix::sparse(2, {{2, 0, 1.0}}), std::invalid_argument);
    EXPECT_THROW(SquareMatrix::sparse(2, {{0, 0, NAN}}), std::invalid_argument);
    DenseMatrix D = DenseMatrix::Zero(2, 2);
    D(1, 1)       = INFINITY;
    EXPECT_THROW(SquareMatrix::dense(D), std::invalid_argument);
    EXPECT_THROW(SquareMatrix::dense(DenseMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST(SquareMatrix, DenseSparseAgree)
{
    const auto S = rand_sparse(9, 0.3, 4);
    const auto D = SquareMatrix::dense(S.to_dense());
    EXPECT_EQ(D.to_sparse().entries(), S.entries());
    EXPECT_EQ(S.transpose().to_dense(), S.to_dense().transpose());
    EXPECT_DOUBLE_EQ(S.frobenius_norm(), S.to_dense().norm());
}

TEST(Split, IdentityHasNoSkewPart)
{
    const auto [S, K] = split_symmetric_skew(SquareMatrix::identity(3));
    EXPECT_EQ(S.to_dense(), DenseMatrix::Identity(3, 3));
    EXPECT_EQ(K.nnz(), 0u);
}

TEST(Split, TwoByTwo)
{
    const auto [S, K] = split_symmetric_skew(SquareMatrix::sparse(2, {{0, 1, 1.0}}));
    DenseMatrix Se(2, 2), Ke(2, 2);
    Se << 0, 0.5, 0.5, 0;
    Ke << 0, 0.5, -0.5, 0;
    EXPECT_EQ(S.to_dense(), Se);
    EXPECT_EQ(K.to_dense(), Ke);
}

TEST(Split, ElementwiseOracleAndExactClasses)
{
    for (std::uint64_t seed : {1, 2, 3})
    {
        const auto A      = gen_gaussian(5, seed);
        const auto [S, K] = split_symmetric_skew(A);
        const auto a = A.to_dense(), s = S.to_dense(), k = K.to_dense();
        for (index_t i = 0; i < 5; ++i)
            for (index_t j = 0; j < 5; ++j)
            {
                EXPECT_EQ(s(i, j), 0.5 * (a(i, j) + a(j, i)));
                EXPECT_EQ(k(i, j), 0.5 * (a(i, j) - a(j, i)));
                EXPECT_EQ(s(i, j), s(j, i));
                EXPECT_EQ(k(i, j), -k(j, i));
            }
        EXPECT_LE(max_abs(s + k - a), 1e-15 * max_abs(a));
    }
}

TEST(Split, SparseInput)
{
    const auto A      = rand_sparse(12, 0.2, 9);
    const auto [S, K] = split_symmetric_skew(A);
    EXPECT_FALSE(S.is_dense());
    EXPECT_LE(max_abs(S.to_dense() + K.to_dense() - A.to_dense()), 1e-15 * A.max_abs());
    EXPECT_EQ(numerical_symmetry(S), 1.0);
}

TEST(Givens, ImpliedMatrixIsOrthogonal)
{
    for (double th : {0.0, 0.3, -0.7, 1.2, std::numbers::pi})
    {
        const GivensRotation G(1, 3, th, 5);
        const DenseMatrix    g = G.to_dense();
        EXPECT_LE(max_abs(g.transpose() * g - DenseMatrix::Identity(5, 5)), 1e-12);
        EXPECT_EQ(g(1, 1), std::cos(th));
        EXPECT_EQ(g(1, 3), -std::sin(th));
        EXPECT_EQ(g(3, 1), std::sin(th));
    }
    EXPECT_THROW(GivensRotation(2, 2, 0.1, 4), std::invalid_argument);
    EXPECT_THROW(GivensRotation(0, 4, 0.1, 4), std::invalid_argument);
}

TEST(Givens, ZeroAngleIsIdentity)
{
    const auto A = gen_gaussian(4, 2);
    const GivensRotation G(0, 2, 0.0, 4);
    EXPECT_EQ(apply_givens(A, G, RotationSide::left_transpose).to_dense(), A.to_dense());
    EXPECT_EQ(apply_givens(A, G, RotationSide::right).to_dense(), A.to_dense());
}

TEST(Givens, QuarterTurnOfIdentity)
{
    const GivensRotation G(0, 1, std::numbers::pi / 2, 3);
    const DenseMatrix    out = apply_givens(SquareMatrix::identity(3), G, RotationSide::left_transpose).to_dense();
    EXPECT_LE(max_abs(out - G.to_dense().transpose()), 1e-15);
    // rows 0 and 1 swapped with one sign flip
    EXPECT_NEAR(out(0, 1), 1.0, 1e-15);
    EXPECT_NEAR(out(1, 0), -1.0, 1e-15);
}

TEST(Givens, MatchesDenseProduct)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto           A = gen_gaussian(4, seed);
        const GivensRotation G(3, 1, 0.1 + 0.3 * static_cast<double>(seed), 4);
        const DenseMatrix    g = G.to_dense(), a = A.to_dense();
        const DenseMatrix    L = apply_givens(A, G, RotationSide::left_transpose).to_dense();
        const DenseMatrix    R = apply_givens(A, G, RotationSide::right).to_dense();
        EXPECT_LE(max_abs(L - g.transpose() * a), 1e-13);
        EXPECT_LE(max_abs(R - a * g), 1e-13);
        // untouched rows / columns are bit-exact
        for (index_t k : {0, 2})
        {
            EXPECT_EQ(L.row(k), a.row(k));
            EXPECT_EQ(R.col(k), a.col(k));
        }
    }
}

TEST(Givens, SparsePathMatchesDense)
{
    const auto           A = rand_sparse(20, 0.15, 7);
    const GivensRotation G(4, 11, 0.37, 20);
    for (auto side : {RotationSide::left_transpose, RotationSide::right})
    {
        const auto s = apply_givens(A, G, side);
        const auto d = apply_givens(SquareMatrix::dense(A.to_dense()), G, side);
        EXPECT_FALSE(s.is_dense());
        EXPECT_LE(max_abs(s.to_dense() - d.to_dense()), 1e-15);
    }
    EXPECT_THROW(apply_givens(A, GivensRotation(0, 1, 0.1, 5), RotationSide::right), dimension_error);
}

TEST(Givens, GramInvariance)
{
    const auto     A   = gen_gaussian(8, 11);
    const IndexSet all = IndexSet::all(8);
    const GivensRotation G(2, 6, 0.8, 8);
    const auto     L = apply_givens(A, G, RotationSide::left_transpose);
    const auto     R = apply_givens(A, G, RotationSide::right);
    const DenseMatrix cg = col_gram(A, all, all), rg = row_gram(A, all, all);
    EXPECT_LE((col_gram(L, all, all) - cg).norm(), 1e-12 * cg.norm());
    EXPECT_LE((row_gram(R, all, all) - rg).norm(), 1e-12 * rg.norm());
}

TEST(GivensFromGram2, Examples)
{
    EXPECT_EQ(givens_from_gram2(1, 0, 2), 0.0);
    EXPECT_NEAR(givens_from_gram2(1, 1, 1), std::numbers::pi / 4, 1e-15);
}

TEST(GivensFromGram2, DiagonalizesAgainstEigensolver)
{
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial)
    {
        double a = trial == 0 ? 3 : rng.normal(), b = trial == 0 ? 2 : rng.normal(), c = trial == 0 ? 1 : rng.normal();
        if (trial % 7 == 0)
            c = a;   // equal diagonal
        const double th = givens_from_gram2(a, b, c);
        EXPECT_GT(th, -std::numbers::pi / 4);
        EXPECT_LE(th, std::numbers::pi / 4);
        DenseMatrix M(2, 2);
        M << a, b, b, c;
        const DenseMatrix G = GivensRotation(0, 1, th, 2).to_dense();
        const DenseMatrix T = G.transpose() * M * G;
        const double      scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1.0});
        EXPECT_LE(std::abs(T(0, 1)), 1e-12 * scale);
        // rotated diagonal is the eigenvalue pair
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es{Eigen::Matrix2d(M)};
        const double lo = std::min(T(0, 0), T(1, 1)), hi = std::max(T(0, 0), T(1, 1));
        EXPECT_NEAR(lo, es.eigenvalues()(0), 1e-12 * scale);
        EXPECT_NEAR(hi, es.eigenvalues()(1), 1e-12 * scale);
    }
}

TEST(Gram, IdentityAndDuplicateRows)
{
    const IndexSet all = IndexSet::all(4);
    EXPECT_EQ(row_gram(SquareMatrix::identity(4), all, all), DenseMatrix::Identity(4, 4));
    DenseMatrix D = gen_gaussian(4, 1).to_dense();
    D.row(3)      = D.row(1);
    const auto g  = row_gram(SquareMatrix::dense(D), IndexSet(4, {1, 3}), all);
    EXPECT_EQ(g(0, 0), g(1, 1));
    EXPECT_EQ(g(0, 1), g(0, 0));
}

TEST(Gram, DoubleLoopOracle)
{
    const auto     A = gen_gaussian(6, 5);
    const auto     a = A.to_dense();
    const IndexSet rows(6, {5, 0, 3}), cols(6, {1, 2, 4, 5});
    const auto     g = row_gram(A, rows, cols);
    const auto     h = col_gram(A, rows, cols);
    ASSERT_EQ(g.rows(), 3);
    ASSERT_EQ(h.rows(), 4);
    for (index_t p = 0; p < 3; ++p)
        for (index_t q = 0; q < 3; ++q)
        {
            double s = 0;
            for (auto c : cols)
                s += a(rows[p], c) * a(rows[q], c);
            EXPECT_NEAR(g(p, q), s, 1e-14);
        }
    for (index_t p = 0; p < 4; ++p)
        for (index_t q = 0; q < 4; ++q)
        {
            double s = 0;
            for (auto r : rows)
                s += a(r, cols[p]) * a(r, cols[q]);
            EXPECT_NEAR(h(p, q), s, 1e-14);
        }
    EXPECT_THROW(row_gram(A, IndexSet(6, {}), cols), std::invalid_argument);
}

TEST(IndexSetTest, ComplementAndValidation)
{
    const IndexSet s(5, {3, 0});
    EXPECT_EQ(s[0], 3);
    EXPECT_TRUE(s.contains(0));
    EXPECT_FALSE(s.contains(1));
    EXPECT_EQ(s.complement().indices(), (std::vector<index_t>{1, 2, 4}));
    EXPECT_THROW(IndexSet(3, {1, 1}), std::invalid_argument);
    EXPECT_THROW(IndexSet(3, {3}), std::invalid_argument);
}

TEST(RelativeError, Examples)
{
    const auto A = gen_gaussian(4, 0);
    EXPECT_EQ(frobenius_relative_error(A, A), 0.0);
    EXPECT_EQ(frobenius_relative_error(SquareMatrix::identity(2), SquareMatrix::zeros(2)), 1.0);
    DenseMatrix a(2, 2), b(2, 2);
    a << 3, 0, 0, 4;
    b << 0, 0, 0, 4;
    EXPECT_DOUBLE_EQ(frobenius_relative_error(SquareMatrix::dense(a), SquareMatrix::dense(b)), 0.6);
    EXPECT_THROW(frobenius_relative_error(SquareMatrix::zeros(2), SquareMatrix::identity(2)), value_error);
    EXPECT_THROW(frobenius_relative_error(SquareMatrix::identity(2), SquareMatrix::identity(3)), dimension_error);
}

TEST(RelativeError, TriangleBound)
{
    for (std::uint64_t s = 0; s < 10; ++s)
    {
        const auto A = gen_gaussian(6, 3 * s), B = gen_gaussian(6, 3 * s + 1), C = gen_gaussian(6, 3 * s + 2);
        const double nA = A.frobenius_norm();
        const double bound =
            ((A.to_dense() - C.to_dense()).norm() + (C.to_dense() - B.to_dense()).norm()) / nA;
        EXPECT_LE(frobenius_relative_error(A, B), bound + 1e-15);
    }
}

TEST(NumericalSymmetry, Conventions)
{
    EXPECT_EQ(numerical_symmetry(gen_symmetric(6, 1)), 1.0);
    EXPECT_EQ(numerical_symmetry(SquareMatrix::sparse(3, {{0, 1, 1.0}, {0, 2, 2.0}, {1, 2, 3.0}})), 0.0);
    EXPECT_EQ(numerical_symmetry(SquareMatrix::identity(3)), 1.0);
    // off-diagonal nonzeros (0,1), (1,0), (0,2): two of three are matched
    const auto A = SquareMatrix::sparse(3, {{0, 1, 1.0}, {0, 2, 2.0}, {1, 0, 1.0}});
    EXPECT_DOUBLE_EQ(numerical_symmetry(A), 2.0 / 3.0);
    // matching is exact, not tolerance based
    EXPECT_EQ(numerical_symmetry(SquareMatrix::sparse(2, {{0, 1, 1.0}, {1, 0, 1.0 + 1e-15}})), 0.0);
    // dense and sparse storage agree
    EXPECT_EQ(numerical_symmetry(SquareMatrix::dense(A.to_dense())), numerical_symmetry(A));
}
