#pragma once
//
// Multiresolution factorization of skew-symmetric matrices. The off-core part
// of H is reduced to disjoint 2x2 blocks [[0, l], [-l, 0]].
//

#include "mmf/mmf_sym.hpp"

namespace mmf {

struct SkewFactorization
{
    index_t                     n = 0;
    std::vector<GivensRotation> rotations;   // applied as A <- G^T A G
    std::vector<index_t>        retired;
    IndexSet                    core_set;
    CoreSparse                  H;
    double                      dropped_norm = 0.0;
    DenseMatrix                 rotated;
};

/// core_size may be 0, in which case every index ends up paired or dropped.
SkewFactorization factor_skew(const SquareMatrix &K, index_t core_size, const FactorOptions &opts = {});
SquareMatrix      reconstruct_skew(const SkewFactorization &F);

SkewFactorization zero_skew_factorization(index_t n);

/// Dense core block plus a greedy maximum-|value| pairing of the non-core indices.
CoreSparse murnaghan_sparsify(const DenseMatrix &Hbar, const IndexSet &core_set, double *dropped_norm = nullptr);

}// namespace mmf
