#include "mmf/storage.hpp"

#include <algorithm>
#include <cmath>

namespace mmf {

namespace {

struct MethodName
{
    Method      method;
    const char *name;
};

constexpr MethodName kMethodNames[] = {
    {Method::symmetric, "symmetric"},
    {Method::skew, "skew"},
    {Method::additive, "additive"},
    {Method::direct_core_diagonal, "direct-corediag"},
    {Method::direct_top_n, "direct-topn"},
    {Method::direct_greedy_top_n, "direct-greedytopn"},
    {Method::cur, "cur"},
    {Method::hybrid, "hybrid"},
};

// every predicted_storage curve is non-decreasing in d from here on
constexpr index_t kMonotoneFrom = 5;

}// namespace

std::string to_string(Method m)
{
    for (const auto &x : kMethodNames)
        if (x.method == m)
            return x.name;
    throw std::logic_error("unknown method");
}

Method parse_method(const std::string &name)
{
    for (const auto &x : kMethodNames)
        if (name == x.name)
            return x.method;
    throw std::invalid_argument("unknown method '" + name + "'");
}

std::string to_string(Accounting a)
{
    switch (a)
    {
    case Accounting::sparse_coo: return "sparse-coo";
    case Accounting::dense: return "dense";
    case Accounting::rank: return "rank";
    }
    throw std::logic_error("unknown accounting");
}

Accounting parse_accounting(const std::string &name)
{
    if (name == "sparse-coo")
        return Accounting::sparse_coo;
    if (name == "dense")
        return Accounting::dense;
    if (name == "rank")
        return Accounting::rank;
    throw std::invalid_argument("unknown accounting '" + name + "'");
}

std::size_t StorageBudget::scalars(const SquareMatrix &A) const
{
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("budget fraction must lie in (0, 1]");
    const double n    = static_cast<double>(A.size());
    const double base = accounting == Accounting::dense ? n * n : 3.0 * static_cast<double>(A.nnz());
    return static_cast<std::size_t>(std::ceil(fraction * base));
}

index_t StorageBudget::rank(index_t n) const
{
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("budget fraction must lie in (0, 1]");
    return std::clamp<index_t>(static_cast<index_t>(std::ceil(fraction * static_cast<double>(n))), 1, n);
}

index_t min_core_size(Method method)
{
    return method == Method::skew ? 0 : 1;
}

std::size_t predicted_storage(Method method, index_t n, index_t d)
{
    if (d < min_core_size(method) || d > n)
        throw std::invalid_argument("core size out of range");
    const auto N = static_cast<std::size_t>(n), D = static_cast<std::size_t>(d);
    const auto L = N - D;
    switch (method)
    {
    case Method::symmetric: return 3 * L + D * D + 3 * L + D;
    case Method::skew: return 3 * (N - std::max<std::size_t>(D, 1)) + D * D + D + 6 * (L / 2);
    case Method::direct_core_diagonal: return 6 * L + D * D + 2 * D + 3 * std::min(N, 2 * L);
    case Method::direct_top_n:
    case Method::direct_greedy_top_n:
    case Method::hybrid: return 6 * L + D * D + 2 * D + 3 * L;
    case Method::cur: return cur_storage(n, d);
    case Method::additive: break;
    }
    throw std::invalid_argument("predicted_storage: additive storage depends on the split; size each half separately");
}

std::size_t method_storage(const SymFactorization &F)
{
    return 3 * F.rotations.size() + F.H.storage();
}

std::size_t method_storage(const SkewFactorization &F)
{
    return 3 * F.rotations.size() + F.H.storage();
}

std::size_t method_storage(const DirectFactorization &F)
{
    return 3 * (F.left.size() + F.right.size()) + F.H.storage();
}

std::size_t method_storage(const CurFactors &F)
{
    return cur_storage(F);
}

namespace {

CoreChoice make_choice(index_t n, index_t d)
{
    return {d, n - d};
}

[[noreturn]] void infeasible(index_t n, Method method, std::size_t budget)
{
    throw budget_error("budget of " + std::to_string(budget) + " scalars is below the minimum for " + to_string(method)
                       + " at n = " + std::to_string(n));
}

}// namespace

CoreChoice solve_core_size(index_t n, Method method, std::size_t budget_scalars)
{
    const index_t lo = min_core_size(method);
    const index_t mono = std::max(lo, kMonotoneFrom);

    if (mono <= n && predicted_storage(method, n, mono) <= budget_scalars)
    {
        index_t a = mono, b = n;   // invariant: a feasible
        while (a < b)
        {
            const index_t mid = a + (b - a + 1) / 2;
            if (predicted_storage(method, n, mid) <= budget_scalars)
                a = mid;
            else
                b = mid - 1;
        }
        return make_choice(n, a);
    }
    for (index_t d = std::min(n, mono - 1); d >= lo; --d)
        if (predicted_storage(method, n, d) <= budget_scalars)
            return make_choice(n, d);
    infeasible(n, method, budget_scalars);
}

CoreChoice solve_core_size_linear(index_t n, Method method, std::size_t budget_scalars)
{
    for (index_t d = n; d >= min_core_size(method); --d)
        if (predicted_storage(method, n, d) <= budget_scalars)
            return make_choice(n, d);
    infeasible(n, method, budget_scalars);
}

CoreChoice solve_core_size(const SquareMatrix &A, Method method, const StorageBudget &budget)
{
    if (budget.accounting == Accounting::rank)
        return make_choice(A.size(), budget.rank(A.size()));
    return solve_core_size(A.size(), method, budget.scalars(A));
}

}// namespace mmf
