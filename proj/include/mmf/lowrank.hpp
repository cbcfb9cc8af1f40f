#pragma once
//
// CUR decomposition by squared-norm sampling, and the hybrid pipeline that
// compresses the CUR product further with the direct factorization.
//

#include <cstdint>

#include "mmf/mmf_direct.hpp"

namespace mmf {

struct CurFactors
{
    DenseMatrix C;   // n x r, verbatim columns of A
    DenseMatrix U;   // r x r
    DenseMatrix R;   // r x n, verbatim rows of A
    IndexSet    col_ids;
    IndexSet    row_ids;

    index_t rank() const { return col_ids.size(); }
    /// C * U * R
    DenseMatrix product() const;
};

CurFactors cur_decompose(const SquareMatrix &A, index_t r, std::uint64_t seed);

/// 2nr + r^2 + 2r: values of C, U, R plus one scalar per selected index
std::size_t cur_storage(const CurFactors &f);
std::size_t cur_storage(index_t n, index_t r);

/// Moore-Penrose pseudoinverse; singular values below rel_cutoff * sigma_max are treated as zero
DenseMatrix pseudoinverse(const DenseMatrix &X, double rel_cutoff = 1e-12);

struct HybridResult
{
    index_t             r = 0;
    index_t             core_size = 0;
    DirectFactorization factor;
    double              error = 0.0;   // ||A - reconstruction||_F / ||A||_F
};

/// CUR of rank r, then the direct factorization of the explicit product with the given core size.
HybridResult hybrid_compress(const SquareMatrix &A, index_t r, index_t core_size, std::uint64_t seed,
                             Sparsifier sparsifier = {SparsifierKind::greedy_top_n, -1});

}// namespace mmf
