#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <gtest/gtest.h>

#include "mmf/dataio.hpp"
#include "mmf/random.hpp"

using namespace mmf;
namespace fs = std::filesystem;

namespace {

const std::string kHead = "%%MatrixMarket matrix coordinate real ";

std::vector<fs::path> fixtures()
{
    std::vector<fs::path> out;
    for (const auto &e : fs::directory_iterator(MMF_TEST_FIXTURES))
        if (e.path().extension() == ".mtx")
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

SquareMatrix rand_sparse(index_t n, double density, std::uint64_t seed)
{
    Rng                rng(seed);
    std::vector<Entry> e;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            if (rng.uniform() < density)
                e.push_back({i, j, rng.normal() * std::pow(10.0, 20 * rng.uniform() - 10)});
    return SquareMatrix::sparse(n, e);
}

}// namespace

TEST(ParseMatrixMarket, GeneralDiagonal)
{
    const auto pm = parse_matrix_market(kHead + "general\n2 2 2\n1 1 1.0\n2 2 2.0\n");
    DenseMatrix D(2, 2);
    D << 1, 0, 0, 2;
    EXPECT_EQ(pm.matrix.to_dense(), D);
    EXPECT_EQ(pm.meta.n, 2);
    EXPECT_EQ(pm.meta.nnz, 2u);
}

TEST(ParseMatrixMarket, SkewUnfoldsWithNegatedMirror)
{
    const auto  pm = parse_matrix_market(kHead + "skew-symmetric\n2 2 1\n2 1 -3.0\n");
    DenseMatrix K(2, 2);
    K << 0, 3, -3, 0;
    EXPECT_EQ(pm.matrix.to_dense(), K);
    const auto big = read_matrix_market(fs::path(MMF_TEST_FIXTURES) / "skew_random12.mtx").matrix.to_dense();
    EXPECT_EQ(big, DenseMatrix(-big.transpose()));
}

TEST(ParseMatrixMarket, SymmetricUnfolds)
{
    const auto pm = read_matrix_market(fs::path(MMF_TEST_FIXTURES) / "symmetric_3.mtx");
    const auto D  = pm.matrix.to_dense();
    EXPECT_EQ(D, DenseMatrix(D.transpose()));
    EXPECT_EQ(D(0, 1), -1.5);
    EXPECT_EQ(pm.meta.nnz, 6u);
    EXPECT_EQ(pm.meta.numerical_symmetry, 1.0);
}

TEST(ParseMatrixMarket, MetadataFromComments)
{
    const auto pm = read_matrix_market(fs::path(MMF_TEST_FIXTURES) / "general_comments.mtx");
    EXPECT_EQ(pm.meta.group, "Test");
    EXPECT_EQ(pm.meta.name, "comments");
    EXPECT_EQ(pm.meta.kind, "directed graph");
    EXPECT_EQ(pm.meta.numerical_symmetry, 0.0);
}

TEST(ParseMatrixMarket, Errors)
{
    EXPECT_THROW(parse_matrix_market(""), parse_error);
    EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead.substr(0, kHead.size() - 5) + "pattern general\n2 2 1\n1 1\n"),
                 parse_error);
    EXPECT_THROW(parse_matrix_market("%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 1 1 0\n"),
                 parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "hermitian\n2 2 0\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "general\n2 3 0\n"), not_square_error);
    EXPECT_THROW(parse_matrix_market(kHead + "general\n2 2 1\n3 1 1.0\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "general\n2 2 1\n0 1 1.0\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "general\n2 2 2\n1 1 1.0\n1 1 2.0\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "symmetric\n2 2 2\n2 1 1.0\n1 2 2.0\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "general\n2 2 2\n1 1 1.0\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "general\n2 2 1\n1 1 1.0\n2 2 1.0\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "general\n2 2 1\n1 1 abc\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "general\n2 2 1\n1 1 nan\n"), parse_error);
    EXPECT_THROW(parse_matrix_market(kHead + "skew-symmetric\n2 2 1\n1 1 1.0\n"), parse_error);
}

TEST(WriteMatrixMarket, ZeroAndIdentity)
{
    EXPECT_EQ(write_matrix_market(SquareMatrix::zeros(3)), "%%MatrixMarket matrix coordinate real general\n3 3 0\n");
    EXPECT_EQ(write_matrix_market(SquareMatrix::identity(2)),
              "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n2 2 1\n");
    const auto text = write_matrix_market(SquareMatrix::identity(1), "name: G/N\nkind: test");
    const auto pm   = parse_matrix_market(text);
    EXPECT_EQ(pm.meta.group, "G");
    EXPECT_EQ(pm.meta.kind, "test");
}

TEST(WriteMatrixMarket, RoundTripIsBitExact)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto A = rand_sparse(10, 0.3, seed);
        const auto B = parse_matrix_market(write_matrix_market(A)).matrix;
        EXPECT_EQ(A.entries(), B.entries()) << "seed " << seed;
    }
    const auto G = gen_gaussian(7, 1);
    EXPECT_EQ(parse_matrix_market(write_matrix_market(G)).matrix.to_dense(), G.to_dense());
}

TEST(WriteMatrixMarket, FixturesRoundTrip)
{
    const auto files = fixtures();
    ASSERT_EQ(files.size(), 20u);
    for (const auto &f : files)
    {
        const auto A = read_matrix_market(f).matrix;
        const auto B = parse_matrix_market(write_matrix_market(A)).matrix;
        EXPECT_EQ(A.entries(), B.entries()) << f.filename();
    }
}

TEST(MatrixRefTest, ParseAndManifest)
{
    EXPECT_EQ(parse_matrix_ref(" HB/west0067 "), (MatrixRef{"HB", "west0067"}));
    EXPECT_THROW(parse_matrix_ref("west0067"), std::invalid_argument);
    EXPECT_THROW(parse_matrix_ref("a/b/c"), std::invalid_argument);
    EXPECT_THROW(parse_matrix_ref("../x"), std::invalid_argument);
    EXPECT_THROW(parse_matrix_ref("HB/we st"), std::invalid_argument);
    const auto refs = read_manifest(fs::path(MMF_DATA_DIR) / "suitesparse" / "manifest.txt");
    EXPECT_EQ(refs.size(), 6u);
    EXPECT_EQ(refs.front().id(), "HB/west0067");
}

TEST(CachedCorpus, MatchesCollectionIndex)
{
    const fs::path root = fs::path(MMF_DATA_DIR) / "suitesparse";
    std::ifstream  idx(root / "index.csv");
    std::string    line;
    std::getline(idx, line);
    int checked = 0;
    while (std::getline(idx, line))
    {
        std::stringstream        ss(line);
        std::vector<std::string> col;
        for (std::string c; std::getline(ss, c, ',');)
            col.push_back(c);
        ASSERT_GE(col.size(), 5u);
        FetchOptions fo;
        fo.cache_dir = root;
        fo.base_url  = "http://127.0.0.1:1";   // a cache miss would fail loudly
        FetchStats st;
        const auto pm = fetch_suitesparse({col[0], col[1]}, fo, &st);
        EXPECT_EQ(st.requests, 0);
        EXPECT_EQ(pm.meta.n, std::stol(col[2])) << col[1];
        EXPECT_EQ(pm.meta.nnz, std::stoul(col[3])) << col[1];
        EXPECT_NEAR(pm.meta.numerical_symmetry, std::stod(col[4]), 1e-12) << col[1];
        EXPECT_LT(pm.meta.numerical_symmetry, 0.25);
        ++checked;
    }
    EXPECT_EQ(checked, 6);
}

TEST(DecaySpectrum, Formula)
{
    const auto d = decay_spectrum(200, 1.0);
    EXPECT_NEAR(d.front(), -0.36788, 1e-4);
    EXPECT_NEAR(d.front(), (1 - std::exp(-1.0)) / (1 - std::exp(1.0)), 1e-15);
    for (double t : {0.5, 3.0, 10.0})
        EXPECT_EQ(decay_spectrum(50, t).back(), 0.0);
    EXPECT_THROW(decay_spectrum(10, 0.0), value_error);
    EXPECT_THROW(decay_spectrum(10, -1.0), value_error);
    EXPECT_THROW(decay_spectrum(1, 1.0), value_error);
}

TEST(DecayMatrix, SymmetricWithPrescribedSpectrum)
{
    for (double t : {1.0, 6.0})
    {
        const auto        A = gen_decay_matrix({48, t, 3});
        const DenseMatrix D = A.to_dense();
        EXPECT_LE((D - D.transpose()).cwiseAbs().maxCoeff(), 1e-13);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
        auto want = decay_spectrum(48, t);
        std::sort(want.begin(), want.end());
        for (index_t k = 0; k < 48; ++k)
            EXPECT_NEAR(es.eigenvalues()(k), want[static_cast<std::size_t>(k)], 1e-10);
    }
}

TEST(RandomOrthogonal, Properties)
{
    const auto one = gen_random_orthogonal(1, 4).to_dense();
    EXPECT_EQ(std::abs(one(0, 0)), 1.0);
    const DenseMatrix Q = gen_random_orthogonal(50, 2).to_dense();
    EXPECT_LE((Q.transpose() * Q - DenseMatrix::Identity(50, 50)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(gen_random_orthogonal(50, 2).to_dense(), Q);
    EXPECT_NE(gen_random_orthogonal(50, 3).to_dense(), Q);
}

TEST(Generators, Classes)
{
    const auto S = gen_symmetric(9, 1).to_dense();
    const auto K = gen_skew(9, 1).to_dense();
    EXPECT_EQ(S, DenseMatrix(S.transpose()));
    EXPECT_EQ(K, DenseMatrix(-K.transpose()));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gen_low_rank(20, 3, 0).to_dense());
    lu.setThreshold(1e-10);
    EXPECT_EQ(lu.rank(), 3);
    EXPECT_EQ(gen_mixed_structure(64, 5).to_dense(), gen_mixed_structure(64, 5).to_dense());
    EXPECT_THROW(gen_mixed_structure(4, 0), value_error);
}

TEST(Gunzip, RejectsGarbage)
{
    EXPECT_THROW(gunzip("not a gzip stream"), fetch_error);
    EXPECT_THROW(tar_extract(std::string(1024, '\0'), "x.mtx"), fetch_error);
}
