#pragma once
//
// Two-sided asymmetric factorization A ~ P1 ... PL H QL^T ... Q1^T with
// independent row and column rotations, H = P^T A Q core-sparse.
//

#include "mmf/mmf_sym.hpp"

namespace mmf {

enum class SparsifierKind
{
    core_diagonal,   // core block + off-core (i,i) positions
    top_n,           // core block + m largest off-core entries
    greedy_top_n     // as top_n, but no two kept entries share a row or a column
};

struct Sparsifier
{
    SparsifierKind kind = SparsifierKind::core_diagonal;
    /// retained off-core entries for top_n / greedy_top_n; negative means n - d
    index_t m = -1;
};

struct DirectFactorization
{
    index_t                     n = 0;
    std::vector<GivensRotation> left;    // P_l, applied as A <- P_l^T A
    std::vector<GivensRotation> right;   // Q_l, applied as A <- A Q_l
    std::vector<index_t>        retired_rows;
    std::vector<index_t>        retired_cols;
    IndexSet                    core_rows;
    IndexSet                    core_cols;
    CoreSparse                  H;
    double                      dropped_norm = 0.0;
    DenseMatrix                 rotated;
};

DirectFactorization factor_direct(const SquareMatrix &A, index_t core_size, Sparsifier sparsifier,
                                  const FactorOptions &opts = {});
SquareMatrix        reconstruct_direct(const DirectFactorization &F);

CoreSparse sparsify(const DenseMatrix &Hbar, const IndexSet &core_rows, const IndexSet &core_cols, Sparsifier sparsifier,
                    double *dropped_norm = nullptr);

/// P1 ... PL (resp. Q1 ... QL) as an explicit dense matrix
DenseMatrix rotation_product(const std::vector<GivensRotation> &rotations, index_t n);

}// namespace mmf
