#include "mmf/mmf_direct.hpp"

#include <algorithm>
#include <cmath>

#include "active_set.hpp"

namespace mmf {

CoreSparse sparsify(const DenseMatrix &Hbar, const IndexSet &core_rows, const IndexSet &core_cols, Sparsifier sparsifier,
                    double *dropped_norm)
{
    const index_t n = Hbar.rows();
    if (Hbar.cols() != n || core_rows.dimension() != n || core_cols.dimension() != n)
        throw dimension_error("core sets do not match matrix dimension");
    if (core_rows.size() != core_cols.size())
        throw dimension_error("core row and column sets differ in size");

    const index_t d = core_rows.size();
    const index_t m = sparsifier.m < 0 ? n - d : sparsifier.m;

    CoreSparse H;
    H.n         = n;
    H.core_rows = core_rows;
    H.core_cols = core_cols;
    H.core.resize(d, d);
    for (index_t a = 0; a < d; ++a)
        for (index_t b = 0; b < d; ++b)
            H.core(a, b) = Hbar(core_rows[a], core_cols[b]);

    auto off_core = [&](index_t i, index_t j) { return !(core_rows.contains(i) && core_cols.contains(j)); };

    if (sparsifier.kind == SparsifierKind::core_diagonal)
    {
        for (index_t i = 0; i < n; ++i)
            if (off_core(i, i) && Hbar(i, i) != 0.0)
                H.offcore.push_back({i, i, Hbar(i, i)});
    }
    else
    {
        std::vector<Entry> cand;
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < n; ++j)
                if (off_core(i, j) && Hbar(i, j) != 0.0)
                    cand.push_back({i, j, Hbar(i, j)});
        std::sort(cand.begin(), cand.end(), [](const Entry &a, const Entry &b) {
            const double x = std::abs(a.value), y = std::abs(b.value);
            if (x != y)
                return x > y;
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });

        if (sparsifier.kind == SparsifierKind::top_n)
        {
            cand.resize(std::min(cand.size(), static_cast<std::size_t>(m)));
            H.offcore = std::move(cand);
        }
        else
        {
            std::vector<char> row_used(static_cast<std::size_t>(n), 0), col_used(static_cast<std::size_t>(n), 0);
            for (const auto &e : cand)
            {
                if (static_cast<index_t>(H.offcore.size()) >= m)
                    break;
                if (row_used[static_cast<std::size_t>(e.row)] || col_used[static_cast<std::size_t>(e.col)])
                    continue;
                row_used[static_cast<std::size_t>(e.row)] = col_used[static_cast<std::size_t>(e.col)] = 1;
                H.offcore.push_back(e);
            }
        }
        std::sort(H.offcore.begin(), H.offcore.end(),
                  [](const Entry &a, const Entry &b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    }

    if (dropped_norm)
    {
        DenseMatrix R = Hbar - H.to_dense();
        *dropped_norm = R.norm();
    }
    return H;
}

DirectFactorization factor_direct(const SquareMatrix &A, index_t core_size, Sparsifier sparsifier, const FactorOptions &opts)
{
    const index_t n = A.size();
    if (core_size < 1 || core_size > n)
        throw value_error("core size " + std::to_string(core_size) + " out of range [1, " + std::to_string(n) + "]");

    DenseMatrix       W = A.to_dense();
    Rng               rng(opts.seed);
    detail::ActiveSet rows(n), cols(n);
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);

    DirectFactorization F;
    F.n = n;

    for (index_t level = 0; level < n - core_size; ++level)
    {
        // row phase: rotate two similar rows, retire the one with less mass on active columns
        {
            const auto   &R  = rows.members();
            const auto   &C  = cols.members();
            const index_t i  = rows.pick(rng);
            const double *wi = W.data() + i * n;
            for (auto k : R)
            {
                const double *wk = W.data() + k * n;
                double        s  = 0.0;
                for (auto c : C)
                    s += wi[c] * wk[c];
                g[static_cast<std::size_t>(k)] = s;
            }
            const index_t j = detail::argmax_partner(R, g, i);

            double g_jj = 0.0;
            for (auto c : C)
                g_jj += W(j, c) * W(j, c);

            const GivensRotation P(
                i, j, givens_from_gram2(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)], g_jj), n);
            rotate_rows(W, i, j, P.cos(), P.sin());
            F.left.push_back(P);

            auto norm2 = [&](index_t t) {
                double s = 0.0;
                for (auto c : C)
                    s += W(t, c) * W(t, c);
                return s;
            };
            const double  ni = norm2(i), nj = norm2(j);
            const index_t t  = ni < nj ? i : nj < ni ? j : std::min(i, j);
            rows.remove(t);
            F.retired_rows.push_back(t);
        }

        // column phase on the updated row set
        {
            const auto   &R = rows.members();
            const auto   &C = cols.members();
            const index_t i = cols.pick(rng);
            for (auto k : C)
                g[static_cast<std::size_t>(k)] = 0.0;
            double g_ii = 0.0;
            for (auto r : R)
            {
                const double *wr = W.data() + r * n;
                const double  w  = wr[i];
                g_ii += w * w;
                for (auto k : C)
                    g[static_cast<std::size_t>(k)] += w * wr[k];
            }
            g[static_cast<std::size_t>(i)] = g_ii;
            const index_t j = detail::argmax_partner(C, g, i);

            double g_jj = 0.0;
            for (auto r : R)
                g_jj += W(r, j) * W(r, j);

            const GivensRotation Q(i, j, givens_from_gram2(g_ii, g[static_cast<std::size_t>(j)], g_jj), n);
            rotate_cols(W, i, j, Q.cos(), Q.sin());
            F.right.push_back(Q);

            auto norm2 = [&](index_t t) {
                double s = 0.0;
                for (auto r : R)
                    s += W(r, t) * W(r, t);
                return s;
            };
            const double  ni = norm2(i), nj = norm2(j);
            const index_t t  = ni < nj ? i : nj < ni ? j : std::min(i, j);
            cols.remove(t);
            F.retired_cols.push_back(t);
        }

        if (opts.on_level)
            opts.on_level(W);
    }

    F.core_rows = rows.sorted(n);
    F.core_cols = cols.sorted(n);
    if (opts.truncate)
        F.H = sparsify(W, F.core_rows, F.core_cols, sparsifier, &F.dropped_norm);
    else
    {
        F.H = sparsify(W, F.core_rows, F.core_cols, {SparsifierKind::core_diagonal, 0});
        F.H.offcore.clear();
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < n; ++j)
                if (!(F.core_rows.contains(i) && F.core_cols.contains(j)) && W(i, j) != 0.0)
                    F.H.offcore.push_back({i, j, W(i, j)});
    }
    if (opts.keep_rotated)
        F.rotated = std::move(W);
    return F;
}

SquareMatrix reconstruct_direct(const DirectFactorization &F)
{
    DenseMatrix M = F.H.to_dense();
    for (auto it = F.left.rbegin(); it != F.left.rend(); ++it)
        rotate_rows(M, it->i(), it->j(), it->cos(), -it->sin());
    for (auto it = F.right.rbegin(); it != F.right.rend(); ++it)
        rotate_cols(M, it->i(), it->j(), it->cos(), -it->sin());
    return SquareMatrix::dense(std::move(M));
}

DenseMatrix rotation_product(const std::vector<GivensRotation> &rotations, index_t n)
{
    DenseMatrix M = DenseMatrix::Identity(n, n);
    for (const auto &G : rotations)
    {
        if (G.dimension() != n)
            throw dimension_error("rotation dimension mismatch");
        rotate_cols(M, G.i(), G.j(), G.cos(), G.sin());
    }
    return M;
}

}// namespace mmf
