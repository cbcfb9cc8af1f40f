#pragma once
//
// A = S + K with S symmetric and K skew; each half factorized on its own and
// the approximants summed.
//

#include "mmf/storage.hpp"

namespace mmf {

struct AdditiveFactorization
{
    index_t           n = 0;
    SymFactorization  sym;
    SkewFactorization skew;
};

/// Budget shared between the halves in proportion to ||S||_F^2 : ||K||_F^2.
AdditiveFactorization factor_additive(const SquareMatrix &A, const StorageBudget &budget, std::uint64_t seed);

/// Explicit core sizes; a negative size stands for the zero factorization of that half.
AdditiveFactorization factor_additive(const SquareMatrix &A, index_t sym_core, index_t skew_core,
                                      const FactorOptions &opts = {});

SquareMatrix reconstruct_additive(const AdditiveFactorization &F);

std::size_t method_storage(const AdditiveFactorization &F);

}// namespace mmf
