#pragma once
//
// The middle factor H: a dense block on (core_rows x core_cols) plus a list of
// off-core coordinates. Symmetric and skew factorizations share one index set
// for rows and columns.
//

#include "mmf/matcore.hpp"

namespace mmf {

struct CoreSparse
{
    index_t            n = 0;
    IndexSet           core_rows;
    IndexSet           core_cols;
    DenseMatrix        core;      // |core_rows| x |core_cols|
    std::vector<Entry> offcore;   // no coordinate inside the core block
    bool               shared_core = false;

    DenseMatrix  to_dense() const;
    SquareMatrix to_matrix() const { return SquareMatrix::dense(to_dense()); }

    /// core scalars + 3 per off-core entry + one scalar per stored core index
    std::size_t storage() const;
};

/// Keep the core block of Hbar and every off-core (i,i) position.
/// Writes the Frobenius norm of the discarded entries to dropped_norm if given.
CoreSparse truncate_core_diagonal(const DenseMatrix &Hbar, const IndexSet &core, double *dropped_norm = nullptr);

/// Zero-valued H with an empty core (the representation of a zero matrix).
CoreSparse empty_core(index_t n);

}// namespace mmf
