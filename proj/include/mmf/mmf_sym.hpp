#pragma once
//
// Symmetric multiresolution factorization A ~ Q1^T ... QL^T H QL ... Q1 by
// greedy pairwise Jacobi rotations.
//

#include <cstdint>
#include <functional>

#include "mmf/core_sparse.hpp"

namespace mmf {

struct FactorOptions
{
    std::uint64_t seed = 0;
    /// false: H keeps every entry of the rotated matrix (lossless)
    bool truncate = true;
    /// store the final rotated matrix in the result
    bool keep_rotated = false;
    /// called with the working matrix after every rotation level
    std::function<void(const DenseMatrix &)> on_level = {};
};

//
// Each stored rotation G was applied as A <- G^T A G, so Q_l = G_l^T.
//
struct SymFactorization
{
    index_t                     n = 0;
    std::vector<GivensRotation> rotations;
    std::vector<index_t>        retired;   // in retirement order
    IndexSet                    core_set;
    CoreSparse                  H;
    double                      dropped_norm = 0.0;
    DenseMatrix                 rotated;   // empty unless keep_rotated
};

SymFactorization factor_symmetric(const SquareMatrix &A, index_t core_size, const FactorOptions &opts = {});
SquareMatrix     reconstruct_sym(const SymFactorization &F);

/// Factorization of the zero matrix: no rotations, empty core.
SymFactorization zero_sym_factorization(index_t n);

namespace detail {

struct ConjugationSchedule
{
    std::vector<GivensRotation> rotations;
    std::vector<index_t>        retired;
    IndexSet                    active;   // sorted survivors
};

/// Runs `levels` greedy rotation levels on W in place, two-sided (G^T W G).
/// mirror_sign = +1 keeps W exactly symmetric, -1 exactly skew.
ConjugationSchedule greedy_conjugate(DenseMatrix &W, index_t levels, double mirror_sign, const FactorOptions &opts);

/// M <- G1 ... GL M GL^T ... G1^T
void unrotate_two_sided(DenseMatrix &M, const std::vector<GivensRotation> &rotations);

}// namespace detail

}// namespace mmf
