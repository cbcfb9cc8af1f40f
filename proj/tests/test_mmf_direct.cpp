#include <cmath>

#include <gtest/gtest.h>

#include "mmf/dataio.hpp"
#include "mmf/mmf_direct.hpp"

using namespace mmf;

namespace {

double rel(const SquareMatrix &A, const SquareMatrix &B) { return frobenius_relative_error(A, B); }

double max_abs(const DenseMatrix &M) { return M.cwiseAbs().maxCoeff(); }

index_t offcore_diagonal_positions(const IndexSet &rows, const IndexSet &cols)
{
    index_t c = 0;
    for (index_t i = 0; i < rows.dimension(); ++i)
        c += !(rows.contains(i) && cols.contains(i));
    return c;
}

}// namespace

TEST(FactorDirect, DiagonalIsExactForEverySparsifier)
{
    DenseMatrix D = DenseMatrix::Zero(8, 8);
    for (index_t k = 0; k < 8; ++k)
        D(k, k) = 0.5 + static_cast<double>(k);
    const auto A = SquareMatrix::dense(D);
    for (auto kind : {SparsifierKind::core_diagonal, SparsifierKind::top_n, SparsifierKind::greedy_top_n})
        for (std::uint64_t seed = 0; seed < 4; ++seed)
        {
            // two-sided retirement can leave 2(n - d) off-core diagonal positions
            const auto F = factor_direct(A, 3, {kind, 8}, {.seed = seed});
            EXPECT_LE(rel(A, reconstruct_direct(F)), 1e-15);
        }
}

TEST(FactorDirect, FullCoreHasNoLevels)
{
    const auto A = gen_random_orthogonal(4, 3);
    const auto F = factor_direct(A, 4, {});
    EXPECT_TRUE(F.left.empty());
    EXPECT_TRUE(F.right.empty());
    EXPECT_EQ(F.H.to_dense(), A.to_dense());
    EXPECT_EQ(rel(A, reconstruct_direct(F)), 0.0);
}

TEST(FactorDirect, UntruncatedIsLossless)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto A = gen_gaussian(6, seed);
        const auto F = factor_direct(A, 2, {}, {.seed = seed, .truncate = false});
        EXPECT_LE(rel(A, reconstruct_direct(F)), 1e-10);
    }
}

TEST(FactorDirect, Structure)
{
    const auto A = gen_gaussian(20, 1);
    const auto F = factor_direct(A, 6, {SparsifierKind::greedy_top_n}, {.seed = 2});
    EXPECT_EQ(F.left.size(), 14u);
    EXPECT_EQ(F.right.size(), 14u);
    EXPECT_EQ(F.core_rows.size(), 6);
    EXPECT_EQ(F.core_cols.size(), 6);
    EXPECT_LE(F.H.offcore.size(), 14u);
    EXPECT_THROW(factor_direct(A, 0, {}), value_error);
    EXPECT_THROW(factor_direct(A, 21, {}), value_error);
}

TEST(FactorDirect, RetiredIndicesAreNeverRotatedAgain)
{
    const auto A = gen_gaussian(25, 4);
    const auto F = factor_direct(A, 3, {}, {.seed = 5});
    auto check = [](const std::vector<GivensRotation> &rots, const std::vector<index_t> &retired) {
        std::vector<char> gone(25, 0);
        for (std::size_t l = 0; l < rots.size(); ++l)
        {
            EXPECT_FALSE(gone[static_cast<std::size_t>(rots[l].i())]);
            EXPECT_FALSE(gone[static_cast<std::size_t>(rots[l].j())]);
            gone[static_cast<std::size_t>(retired[l])] = 1;
        }
    };
    check(F.left, F.retired_rows);
    check(F.right, F.retired_cols);
}

TEST(FactorDirect, RotationProductsAreOrthogonal)
{
    const auto        A = gen_gaussian(30, 6);
    const auto        F = factor_direct(A, 4, {}, {.seed = 1});
    const DenseMatrix P = rotation_product(F.left, 30), Q = rotation_product(F.right, 30);
    const DenseMatrix I = DenseMatrix::Identity(30, 30);
    EXPECT_LE(max_abs(P.transpose() * P - I), 1e-11);
    EXPECT_LE(max_abs(Q.transpose() * Q - I), 1e-11);
    // H = P^T A Q before sparsification
    const auto G = factor_direct(A, 4, {}, {.seed = 1, .keep_rotated = true});
    EXPECT_LE(max_abs(G.rotated - P.transpose() * A.to_dense() * Q), 1e-12 * A.max_abs());
}

TEST(FactorDirect, RowPhaseKeepsColumnGram)
{
    const auto     A = gen_gaussian(12, 2);
    const auto     F = factor_direct(A, 3, {}, {.seed = 0});
    const IndexSet all = IndexSet::all(12);
    DenseMatrix    W = A.to_dense();
    const DenseMatrix cg0 = col_gram(A, all, all);
    for (const auto &P : F.left)
        rotate_rows(W, P.i(), P.j(), P.cos(), P.sin());
    EXPECT_LE((col_gram(SquareMatrix::dense(W), all, all) - cg0).norm(), 1e-12 * cg0.norm());
    DenseMatrix       V   = A.to_dense();
    const DenseMatrix rg0 = row_gram(A, all, all);
    for (const auto &Q : F.right)
        rotate_cols(V, Q.i(), Q.j(), Q.cos(), Q.sin());
    EXPECT_LE((row_gram(SquareMatrix::dense(V), all, all) - rg0).norm(), 1e-12 * rg0.norm());
}

TEST(FactorDirect, DroppedMassIdentity)
{
    for (auto kind : {SparsifierKind::core_diagonal, SparsifierKind::top_n, SparsifierKind::greedy_top_n})
        for (std::uint64_t seed = 0; seed < 3; ++seed)
        {
            const auto A = gen_gaussian(24, seed);
            const auto F = factor_direct(A, 5, {kind}, {.seed = seed});
            EXPECT_NEAR(rel(A, reconstruct_direct(F)), F.dropped_norm / A.frobenius_norm(), 1e-10);
        }
}

TEST(FactorDirect, SparsifierDominance)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto    A  = gen_gaussian(32, 100 + seed);
        const auto    Fc = factor_direct(A, 6, {SparsifierKind::core_diagonal}, {.seed = seed});
        const index_t m  = offcore_diagonal_positions(Fc.core_rows, Fc.core_cols);
        const auto    Ft = factor_direct(A, 6, {SparsifierKind::top_n, m}, {.seed = seed});
        const auto    Fg = factor_direct(A, 6, {SparsifierKind::greedy_top_n, m}, {.seed = seed});
        ASSERT_EQ(Fc.core_rows, Ft.core_rows);
        const double ec = rel(A, reconstruct_direct(Fc)), et = rel(A, reconstruct_direct(Ft)),
                     eg = rel(A, reconstruct_direct(Fg));
        EXPECT_LE(et, ec + 1e-12);
        EXPECT_LE(et, eg + 1e-12);
    }
}

TEST(FactorDirect, MirroredSymmetricFactorizationStaysSymmetric)
{
    const auto A = gen_symmetric(14, 3);
    const auto S = factor_symmetric(A, 4, {.seed = 2});
    DirectFactorization F;
    F.n         = 14;
    F.left      = S.rotations;
    F.right     = S.rotations;
    F.core_rows = F.core_cols = S.core_set;
    F.H         = S.H;
    const DenseMatrix R = reconstruct_direct(F).to_dense();
    EXPECT_LE(max_abs(R - R.transpose()), 1e-10);
    EXPECT_LE(max_abs(R - reconstruct_sym(S).to_dense()), 1e-12);
}

TEST(Sparsify, DiagonalIsLossless)
{
    DenseMatrix D = DenseMatrix::Zero(5, 5);
    for (index_t k = 0; k < 5; ++k)
        D(k, k) = static_cast<double>(k + 1);
    const IndexSet core(5, {2});
    for (auto kind : {SparsifierKind::core_diagonal, SparsifierKind::top_n, SparsifierKind::greedy_top_n})
    {
        double dropped = 1;
        EXPECT_EQ(sparsify(D, core, core, {kind}, &dropped).to_dense(), D);
        EXPECT_EQ(dropped, 0.0);
    }
}

TEST(Sparsify, GreedyHandTrace)
{
    // off-core entries (0,1,5), (1,0,4), (0,2,3); core is {3}
    DenseMatrix H = DenseMatrix::Zero(4, 4);
    H(0, 1) = 5;
    H(1, 0) = 4;
    H(0, 2) = 3;
    H(3, 3) = 7;
    const IndexSet core(4, {3});
    const auto     T = sparsify(H, core, core, {SparsifierKind::top_n, 2});
    const auto     G = sparsify(H, core, core, {SparsifierKind::greedy_top_n, 2});
    const std::vector<Entry> expect{{0, 1, 5.0}, {1, 0, 4.0}};
    EXPECT_EQ(T.offcore, expect);
    EXPECT_EQ(G.offcore, expect);
    EXPECT_EQ(T.core(0, 0), 7.0);
    // with a larger budget the greedy rule still rejects (0,2): row 0 is taken
    EXPECT_EQ(sparsify(H, core, core, {SparsifierKind::greedy_top_n, 3}).offcore, expect);
    EXPECT_EQ(sparsify(H, core, core, {SparsifierKind::top_n, 3}).offcore.size(), 3u);
}

TEST(Sparsify, TopNBeatsDiagonalWithEnoughBudget)
{
    const DenseMatrix H = gen_gaussian(10, 8).to_dense();
    const IndexSet    rows(10, {0, 3, 5}), cols(10, {1, 3, 9});
    const index_t     m = offcore_diagonal_positions(rows, cols);
    double            dc = 0, dt = 0;
    sparsify(H, rows, cols, {SparsifierKind::core_diagonal}, &dc);
    sparsify(H, rows, cols, {SparsifierKind::top_n, m}, &dt);
    EXPECT_LE(dt, dc + 1e-15);
}

TEST(Sparsify, GreedyIsPartialPermutation)
{
    const DenseMatrix H = gen_gaussian(12, 3).to_dense();
    const IndexSet    core(12, {2, 7});
    const auto        G = sparsify(H, core, core, {SparsifierKind::greedy_top_n});
    EXPECT_EQ(G.offcore.size(), 10u);
    std::vector<int> r(12, 0), c(12, 0);
    for (const auto &e : G.offcore)
    {
        EXPECT_EQ(++r[static_cast<std::size_t>(e.row)], 1);
        EXPECT_EQ(++c[static_cast<std::size_t>(e.col)], 1);
        EXPECT_FALSE(core.contains(e.row) && core.contains(e.col));
    }
}
