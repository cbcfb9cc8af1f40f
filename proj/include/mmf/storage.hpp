#pragma once
//
// One storage ruler for every method: counts stored scalars (values and
// indices alike) and inverts the count to pick core sizes and CUR ranks.
//

#include <string>

#include "mmf/lowrank.hpp"
#include "mmf/mmf_skew.hpp"

namespace mmf {

enum class Accounting
{
    sparse_coo,   // base = 3 nnz(A)
    dense,        // base = n^2
    rank          // fraction * n is used directly as core size / CUR rank
};

enum class Method
{
    symmetric,
    skew,
    additive,
    direct_core_diagonal,
    direct_top_n,
    direct_greedy_top_n,
    cur,
    hybrid
};

std::string to_string(Method m);
Method      parse_method(const std::string &name);
std::string to_string(Accounting a);
Accounting  parse_accounting(const std::string &name);

class budget_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct StorageBudget
{
    double     fraction   = 0.1;
    Accounting accounting = Accounting::sparse_coo;

    /// ceil(fraction * base); only meaningful for the scalar rulers
    std::size_t scalars(const SquareMatrix &A) const;
    /// max(1, ceil(fraction * n)); the rank ruler's core size
    index_t rank(index_t n) const;
};

/// Upper bound on method_storage for a factorization with core size (or CUR rank) d.
std::size_t predicted_storage(Method method, index_t n, index_t d);

std::size_t method_storage(const SymFactorization &F);
std::size_t method_storage(const SkewFactorization &F);
std::size_t method_storage(const DirectFactorization &F);
std::size_t method_storage(const CurFactors &F);

struct CoreChoice
{
    index_t d = 0;   // core size, or rank for CUR
    index_t m = 0;   // retained off-core entries for the top-n sparsifiers
};

/// Largest d with predicted_storage(method, n, d) <= budget. Throws budget_error if none fits.
CoreChoice solve_core_size(index_t n, Method method, std::size_t budget_scalars);
/// Same, by exhaustive scan; kept as a cross-check.
CoreChoice solve_core_size_linear(index_t n, Method method, std::size_t budget_scalars);
/// Dispatches on the budget's ruler.
CoreChoice solve_core_size(const SquareMatrix &A, Method method, const StorageBudget &budget);

/// smallest admissible d for the method
index_t min_core_size(Method method);

}// namespace mmf
