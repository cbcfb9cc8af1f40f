#include "mmf/core_sparse.hpp"

#include <cmath>

namespace mmf {

DenseMatrix CoreSparse::to_dense() const
{
    DenseMatrix H = DenseMatrix::Zero(n, n);
    for (index_t a = 0; a < core_rows.size(); ++a)
        for (index_t b = 0; b < core_cols.size(); ++b)
            H(core_rows[a], core_cols[b]) = core(a, b);
    for (const auto &e : offcore)
        H(e.row, e.col) = e.value;
    return H;
}

std::size_t CoreSparse::storage() const
{
    const auto d_r   = static_cast<std::size_t>(core_rows.size());
    const auto d_c   = static_cast<std::size_t>(core_cols.size());
    const auto index = shared_core ? d_r : d_r + d_c;
    return d_r * d_c + 3 * offcore.size() + index;
}

CoreSparse truncate_core_diagonal(const DenseMatrix &Hbar, const IndexSet &core, double *dropped_norm)
{
    const index_t n = Hbar.rows();
    if (Hbar.cols() != n || core.dimension() != n)
        throw dimension_error("core set does not match matrix dimension");

    CoreSparse H;
    H.n           = n;
    H.core_rows   = core;
    H.core_cols   = core;
    H.shared_core = true;
    H.core.resize(core.size(), core.size());
    for (index_t a = 0; a < core.size(); ++a)
        for (index_t b = 0; b < core.size(); ++b)
            H.core(a, b) = Hbar(core[a], core[b]);

    double dropped = 0.0;
    for (index_t i = 0; i < n; ++i)
    {
        const bool in_i = core.contains(i);
        if (!in_i)
            H.offcore.push_back({i, i, Hbar(i, i)});
        for (index_t j = 0; j < n; ++j)
            if (j != i && !(in_i && core.contains(j)))
                dropped += Hbar(i, j) * Hbar(i, j);
    }
    if (dropped_norm)
        *dropped_norm = std::sqrt(dropped);
    return H;
}

CoreSparse empty_core(index_t n)
{
    CoreSparse H;
    H.n           = n;
    H.core_rows   = IndexSet(n, {});
    H.core_cols   = IndexSet(n, {});
    H.shared_core = true;
    return H;
}

}// namespace mmf
