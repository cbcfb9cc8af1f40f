#include "mmf/mmf_additive.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace mmf {

AdditiveFactorization factor_additive(const SquareMatrix &A, index_t sym_core, index_t skew_core, const FactorOptions &opts)
{
    const index_t n     = A.size();
    auto [S, K]         = split_symmetric_skew(A);

    AdditiveFactorization F;
    F.n    = n;
    F.sym  = sym_core < 0 ? zero_sym_factorization(n) : factor_symmetric(S, sym_core, opts);
    F.skew = skew_core < 0 ? zero_skew_factorization(n) : factor_skew(K, skew_core, opts);
    return F;
}

AdditiveFactorization factor_additive(const SquareMatrix &A, const StorageBudget &budget, std::uint64_t seed)
{
    const index_t n  = A.size();
    const auto    sk = split_symmetric_skew(A);
    const double  ms = std::pow(sk.symmetric.frobenius_norm(), 2);
    const double  mk = std::pow(sk.skew.frobenius_norm(), 2);
    if (ms + mk == 0.0)
        throw value_error("factor_additive: zero matrix");

    index_t d_sym = -1, d_skew = -1;

    if (budget.accounting == Accounting::rank)
    {
        const index_t k = budget.rank(n);
        if (mk == 0.0)
            d_sym = k;
        else if (ms == 0.0)
            d_skew = k;
        else
        {
            d_sym  = std::clamp<index_t>(static_cast<index_t>(std::llround(static_cast<double>(k) * ms / (ms + mk))), 1, n);
            d_skew = std::clamp<index_t>(k - d_sym, 0, n);
        }
    }
    else
    {
        const std::size_t B = budget.scalars(A);
        auto try_solve = [n](Method m, std::size_t b) -> std::optional<index_t> {
            try
            {
                return solve_core_size(n, m, b).d;
            }
            catch (const budget_error &)
            {
                return std::nullopt;
            }
        };

        if (mk == 0.0)
            d_sym = solve_core_size(n, Method::symmetric, B).d;
        else if (ms == 0.0)
            d_skew = solve_core_size(n, Method::skew, B).d;
        else
        {
            const auto B_sym  = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(B) * ms / (ms + mk))));
            const auto B_skew = std::max<std::size_t>(1, B > B_sym ? B - B_sym : 0);
            auto       s      = try_solve(Method::symmetric, B_sym);
            auto       k      = try_solve(Method::skew, B_skew);
            if (s && k)
                d_sym = *s, d_skew = *k;
            else
            {
                // a half that cannot be stored at its share is dropped and the other half gets everything
                const bool sym_first = s.has_value() || (!k && ms >= mk);
                if (sym_first)
                {
                    if (auto full = try_solve(Method::symmetric, B))
                        d_sym = *full;
                    else if (auto fk = try_solve(Method::skew, B))
                        d_skew = *fk;
                }
                else
                {
                    if (auto full = try_solve(Method::skew, B))
                        d_skew = *full;
                    else if (auto fs = try_solve(Method::symmetric, B))
                        d_sym = *fs;
                }
                if (d_sym < 0 && d_skew < 0)
                    throw budget_error("budget of " + std::to_string(B) + " scalars cannot hold either additive half");
            }
        }
    }

    FactorOptions opts;
    opts.seed = seed;
    AdditiveFactorization F;
    F.n    = n;
    F.sym  = d_sym < 0 ? zero_sym_factorization(n) : factor_symmetric(sk.symmetric, d_sym, opts);
    F.skew = d_skew < 0 ? zero_skew_factorization(n) : factor_skew(sk.skew, d_skew, opts);
    return F;
}

SquareMatrix reconstruct_additive(const AdditiveFactorization &F)
{
    return SquareMatrix::dense(reconstruct_sym(F.sym).to_dense() + reconstruct_skew(F.skew).to_dense());
}

std::size_t method_storage(const AdditiveFactorization &F)
{
    return method_storage(F.sym) + method_storage(F.skew);
}

}// namespace mmf
