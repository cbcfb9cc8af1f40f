#include "mmf/mmf_skew.hpp"

#include <algorithm>
#include <cmath>

namespace mmf {

CoreSparse murnaghan_sparsify(const DenseMatrix &Hbar, const IndexSet &core_set, double *dropped_norm)
{
    const index_t n = Hbar.rows();
    if (Hbar.cols() != n || core_set.dimension() != n)
        throw dimension_error("core set does not match matrix dimension");

    CoreSparse H;
    H.n           = n;
    H.core_rows   = core_set;
    H.core_cols   = core_set;
    H.shared_core = true;
    H.core.resize(core_set.size(), core_set.size());
    for (index_t a = 0; a < core_set.size(); ++a)
        for (index_t b = 0; b < core_set.size(); ++b)
            H.core(a, b) = Hbar(core_set[a], core_set[b]);

    const auto free_idx = core_set.complement();
    struct Candidate
    {
        index_t p, q;
        double  mag;
    };
    std::vector<Candidate> cand;
    for (index_t a = 0; a < free_idx.size(); ++a)
        for (index_t b = a + 1; b < free_idx.size(); ++b)
        {
            const index_t p = free_idx[a], q = free_idx[b];
            if (Hbar(p, q) != 0.0)
                cand.push_back({p, q, std::abs(Hbar(p, q))});
        }
    std::stable_sort(cand.begin(), cand.end(), [](const Candidate &x, const Candidate &y) { return x.mag > y.mag; });

    std::vector<index_t> partner(static_cast<std::size_t>(n), -1);
    for (const auto &c : cand)
    {
        if (partner[static_cast<std::size_t>(c.p)] >= 0 || partner[static_cast<std::size_t>(c.q)] >= 0)
            continue;
        partner[static_cast<std::size_t>(c.p)] = c.q;
        partner[static_cast<std::size_t>(c.q)] = c.p;
        const double v = Hbar(c.p, c.q);
        H.offcore.push_back({c.p, c.q, v});
        H.offcore.push_back({c.q, c.p, -v});
    }
    std::sort(H.offcore.begin(), H.offcore.end(),
              [](const Entry &a, const Entry &b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

    if (dropped_norm)
    {
        double dropped = 0.0;
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < n; ++j)
                if (!(core_set.contains(i) && core_set.contains(j)) && partner[static_cast<std::size_t>(i)] != j)
                    dropped += Hbar(i, j) * Hbar(i, j);
        *dropped_norm = std::sqrt(dropped);
    }
    return H;
}

SkewFactorization factor_skew(const SquareMatrix &K, index_t core_size, const FactorOptions &opts)
{
    const index_t n = K.size();
    if (core_size < 0 || core_size > n)
        throw value_error("core size " + std::to_string(core_size) + " out of range [0, " + std::to_string(n) + "]");

    DenseMatrix  W     = K.to_dense();
    const double scale = W.size() ? W.cwiseAbs().maxCoeff() : 0.0;
    if ((W + W.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw value_error("factor_skew: input is not skew-symmetric");
    W = (0.5 * (W - W.transpose())).eval();

    auto sched = detail::greedy_conjugate(W, n - std::max<index_t>(core_size, 1), -1.0, opts);
    if (core_size == 0)
    {
        sched.retired.push_back(sched.active[0]);
        sched.active = IndexSet(n, {});
    }

    SkewFactorization F;
    F.n         = n;
    F.rotations = std::move(sched.rotations);
    F.retired   = std::move(sched.retired);
    F.core_set  = std::move(sched.active);
    if (opts.truncate)
        F.H = murnaghan_sparsify(W, F.core_set, &F.dropped_norm);
    else
    {
        F.H = murnaghan_sparsify(W, F.core_set);
        F.H.offcore.clear();
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < n; ++j)
                if (!(F.core_set.contains(i) && F.core_set.contains(j)) && W(i, j) != 0.0)
                    F.H.offcore.push_back({i, j, W(i, j)});
    }
    if (opts.keep_rotated)
        F.rotated = std::move(W);
    return F;
}

SquareMatrix reconstruct_skew(const SkewFactorization &F)
{
    DenseMatrix M = F.H.to_dense();
    detail::unrotate_two_sided(M, F.rotations);
    M = (0.5 * (M - M.transpose())).eval();
    return SquareMatrix::dense(std::move(M));
}

SkewFactorization zero_skew_factorization(index_t n)
{
    SkewFactorization F;
    F.n        = n;
    F.core_set = IndexSet(n, {});
    F.H        = empty_core(n);
    return F;
}

}// namespace mmf
