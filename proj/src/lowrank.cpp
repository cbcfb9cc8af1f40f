#include "mmf/lowrank.hpp"

#include <algorithm>

#include <Eigen/SVD>

#include "mmf/random.hpp"

namespace mmf {

namespace {

// r distinct indices, each draw proportional to weight among those not yet drawn;
// once the positive weights are used up the remaining picks are uniform
std::vector<index_t> sample_without_replacement(std::vector<double> w, index_t r, Rng &rng)
{
    std::vector<index_t> picked;
    std::vector<char>    taken(w.size(), 0);
    for (index_t s = 0; s < r; ++s)
    {
        double total = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k)
            if (!taken[k])
                total += w[k];

        std::size_t choice = w.size();
        if (total > 0.0)
        {
            const double u   = rng.uniform() * total;
            double       acc = 0.0;
            for (std::size_t k = 0; k < w.size(); ++k)
            {
                if (taken[k] || w[k] <= 0.0)
                    continue;
                acc += w[k];
                choice = k;
                if (u < acc)
                    break;
            }
        }
        else
        {
            std::vector<std::size_t> rest;
            for (std::size_t k = 0; k < w.size(); ++k)
                if (!taken[k])
                    rest.push_back(k);
            choice = rest[rng.uniform_index(rest.size())];
        }
        taken[choice] = 1;
        picked.push_back(static_cast<index_t>(choice));
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}// namespace

DenseMatrix CurFactors::product() const
{
    return C * (U * R);
}

DenseMatrix pseudoinverse(const DenseMatrix &X, double rel_cutoff)
{
    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto  &sv     = svd.singularValues();
    const double cutoff = sv.size() ? rel_cutoff * sv(0) : 0.0;
    Eigen::VectorXd inv(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        inv(k) = sv(k) > cutoff && sv(k) > 0.0 ? 1.0 / sv(k) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

CurFactors cur_decompose(const SquareMatrix &A, index_t r, std::uint64_t seed)
{
    const index_t n = A.size();
    if (r < 1 || r > n)
        throw value_error("CUR rank " + std::to_string(r) + " out of range [1, " + std::to_string(n) + "]");
    if (A.frobenius_norm() == 0.0)
        throw value_error("CUR of a zero matrix");

    const DenseMatrix D = A.to_dense();
    std::vector<double> cw(static_cast<std::size_t>(n)), rw(static_cast<std::size_t>(n));
    for (index_t k = 0; k < n; ++k)
    {
        cw[static_cast<std::size_t>(k)] = D.col(k).squaredNorm();
        rw[static_cast<std::size_t>(k)] = D.row(k).squaredNorm();
    }

    Rng        rng(seed);
    CurFactors f;
    f.col_ids = IndexSet(n, sample_without_replacement(cw, r, rng));
    f.row_ids = IndexSet(n, sample_without_replacement(rw, r, rng));

    f.C.resize(n, r);
    f.R.resize(r, n);
    for (index_t a = 0; a < r; ++a)
    {
        f.C.col(a) = D.col(f.col_ids[a]);
        f.R.row(a) = D.row(f.row_ids[a]);
    }
    f.U = pseudoinverse(f.C) * D * pseudoinverse(f.R);
    return f;
}

std::size_t cur_storage(index_t n, index_t r)
{
    const auto N = static_cast<std::size_t>(n), R = static_cast<std::size_t>(r);
    return 2 * N * R + R * R + 2 * R;
}

std::size_t cur_storage(const CurFactors &f)
{
    return cur_storage(f.C.rows(), f.rank());
}

HybridResult hybrid_compress(const SquareMatrix &A, index_t r, index_t core_size, std::uint64_t seed, Sparsifier sparsifier)
{
    const CurFactors cur = cur_decompose(A, r, seed);
    const auto       M   = SquareMatrix::dense(cur.product());

    FactorOptions opts;
    opts.seed = seed;

    HybridResult out;
    out.r         = r;
    out.core_size = core_size;
    out.factor    = factor_direct(M, core_size, sparsifier, opts);
    out.error     = frobenius_relative_error(A, reconstruct_direct(out.factor));
    return out;
}

}// namespace mmf
