#include "mmf/mmf_sym.hpp"

#include <cmath>

#include "active_set.hpp"

namespace mmf {

namespace detail {

ConjugationSchedule greedy_conjugate(DenseMatrix &W, index_t levels, double mirror_sign, const FactorOptions &opts)
{
    const index_t n = W.rows();
    Rng           rng(opts.seed);
    ActiveSet     active(n);

    ConjugationSchedule out;
    out.rotations.reserve(static_cast<std::size_t>(levels));
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);

    for (index_t level = 0; level < levels; ++level)
    {
        if (active.size() < 2)
            throw std::logic_error("active set exhausted before the last level");

        const auto   &act = active.members();
        const index_t i   = active.pick(rng);
        const double *wi  = W.data() + i * n;

        // row Gram column of i over active columns
        for (auto k : act)
        {
            const double *wk = W.data() + k * n;
            double        s  = 0.0;
            for (auto c : act)
                s += wi[c] * wk[c];
            g[static_cast<std::size_t>(k)] = s;
        }
        const index_t j = argmax_partner(act, g, i);

        double g_jj = 0.0;
        for (auto c : act)
            g_jj += W(j, c) * W(j, c);

        const GivensRotation G(i, j, givens_from_gram2(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)], g_jj), n);
        rotate_rows(W, i, j, G.cos(), G.sin());
        rotate_cols(W, i, j, G.cos(), G.sin());
        W(j, i) = mirror_sign * W(i, j);
        if (mirror_sign < 0)
            W(i, i) = W(j, j) = 0.0;
        out.rotations.push_back(G);

        auto residual = [&](index_t t) {
            double s = 0.0;
            for (auto c : act)
                if (c != t)
                    s += W(t, c) * W(t, c);
            return s;
        };
        const double  ri = residual(i), rj = residual(j);
        const index_t t  = ri < rj ? i : rj < ri ? j : std::min(i, j);
        active.remove(t);
        out.retired.push_back(t);

        if (opts.on_level)
            opts.on_level(W);
    }
    out.active = active.sorted(n);
    return out;
}

void unrotate_two_sided(DenseMatrix &M, const std::vector<GivensRotation> &rotations)
{
    for (auto it = rotations.rbegin(); it != rotations.rend(); ++it)
    {
        rotate_rows(M, it->i(), it->j(), it->cos(), -it->sin());
        rotate_cols(M, it->i(), it->j(), it->cos(), -it->sin());
    }
}

}// namespace detail

namespace {

CoreSparse keep_everything(const DenseMatrix &W, const IndexSet &core)
{
    CoreSparse H = truncate_core_diagonal(W, core);
    H.offcore.clear();
    for (index_t i = 0; i < W.rows(); ++i)
        for (index_t j = 0; j < W.cols(); ++j)
            if (!(core.contains(i) && core.contains(j)) && W(i, j) != 0.0)
                H.offcore.push_back({i, j, W(i, j)});
    return H;
}

}// namespace

SymFactorization factor_symmetric(const SquareMatrix &A, index_t core_size, const FactorOptions &opts)
{
    const index_t n = A.size();
    if (core_size < 1 || core_size > n)
        throw value_error("core size " + std::to_string(core_size) + " out of range [1, " + std::to_string(n) + "]");

    DenseMatrix  W     = A.to_dense();
    const double scale = W.size() ? W.cwiseAbs().maxCoeff() : 0.0;
    if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw value_error("factor_symmetric: input is not symmetric");
    W = (0.5 * (W + W.transpose())).eval();

    auto sched = detail::greedy_conjugate(W, n - core_size, +1.0, opts);

    SymFactorization F;
    F.n         = n;
    F.rotations = std::move(sched.rotations);
    F.retired   = std::move(sched.retired);
    F.core_set  = std::move(sched.active);
    if (opts.truncate)
        F.H = truncate_core_diagonal(W, F.core_set, &F.dropped_norm);
    else
        F.H = keep_everything(W, F.core_set);
    if (opts.keep_rotated)
        F.rotated = std::move(W);
    return F;
}

SquareMatrix reconstruct_sym(const SymFactorization &F)
{
    DenseMatrix M = F.H.to_dense();
    detail::unrotate_two_sided(M, F.rotations);
    // conjugation is symmetric up to rounding; restore it exactly
    M = (0.5 * (M + M.transpose())).eval();
    return SquareMatrix::dense(std::move(M));
}

SymFactorization zero_sym_factorization(index_t n)
{
    SymFactorization F;
    F.n        = n;
    F.core_set = IndexSet(n, {});
    F.H        = empty_core(n);
    return F;
}

}// namespace mmf
