#pragma once
//
// Square-matrix primitives shared by every factorization: dense/coordinate
// storage, Givens rotations, index sets, Gram matrices and error metrics.
//

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace mmf {

using index_t     = std::ptrdiff_t;
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class dimension_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class value_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct Entry
{
    index_t row   = 0;
    index_t col   = 0;
    double  value = 0.0;

    friend bool operator==(const Entry &, const Entry &) = default;
};

//
// Real n x n matrix, stored either densely (row-major) or as a sorted list of
// nonzero coordinates. Immutable after construction.
//
class SquareMatrix
{
public:
    SquareMatrix() = default;

    static SquareMatrix dense(DenseMatrix values);
    /// Entries are sorted row-major; explicit zeros are dropped, duplicates rejected.
    static SquareMatrix sparse(index_t n, std::vector<Entry> entries);
    static SquareMatrix zeros(index_t n);
    static SquareMatrix identity(index_t n);

    index_t size() const noexcept { return n_; }
    bool    is_dense() const noexcept { return std::holds_alternative<DenseMatrix>(storage_); }

    /// number of nonzero values (not stored slots)
    std::size_t nnz() const;
    double      density() const;

    double operator()(index_t i, index_t j) const;

    DenseMatrix        to_dense() const;
    std::vector<Entry> entries() const;
    SquareMatrix       to_sparse() const;
    SquareMatrix       transpose() const;

    double frobenius_norm() const;
    double max_abs() const;

    const DenseMatrix &dense_values() const;                  // throws unless is_dense()
    std::span<const Entry> sparse_entries() const;            // throws unless !is_dense()

private:
    index_t                                         n_ = 0;
    std::variant<DenseMatrix, std::vector<Entry>>   storage_;
};

//
// Rotation by theta in the (i,j) plane. The implied matrix G differs from the
// identity only in G(i,i) = G(j,j) = cos(theta), G(i,j) = -sin(theta),
// G(j,i) = sin(theta).
//
class GivensRotation
{
public:
    GivensRotation(index_t i, index_t j, double theta, index_t n);

    index_t i() const noexcept { return i_; }
    index_t j() const noexcept { return j_; }
    double  theta() const noexcept { return theta_; }
    index_t dimension() const noexcept { return n_; }

    double cos() const noexcept { return c_; }
    double sin() const noexcept { return s_; }

    GivensRotation inverse() const { return {i_, j_, -theta_, n_}; }
    DenseMatrix    to_dense() const;

private:
    index_t i_, j_;
    double  theta_;
    index_t n_;
    double  c_, s_;
};

enum class RotationSide
{
    left_transpose,   // G^T A : mixes rows i and j
    right             // A G   : mixes columns i and j
};

//
// Ordered list of distinct indices in [0, n).
//
class IndexSet
{
public:
    IndexSet() = default;
    IndexSet(index_t n, std::vector<index_t> indices);

    static IndexSet all(index_t n);

    index_t dimension() const noexcept { return n_; }
    index_t size() const noexcept { return static_cast<index_t>(idx_.size()); }
    bool    empty() const noexcept { return idx_.empty(); }
    index_t operator[](index_t pos) const { return idx_[static_cast<std::size_t>(pos)]; }
    bool    contains(index_t k) const { return k >= 0 && k < n_ && member_[static_cast<std::size_t>(k)] != 0; }

    IndexSet complement() const;

    const std::vector<index_t> &indices() const noexcept { return idx_; }
    auto begin() const { return idx_.begin(); }
    auto end() const { return idx_.end(); }

    friend bool operator==(const IndexSet &a, const IndexSet &b) { return a.n_ == b.n_ && a.idx_ == b.idx_; }

private:
    index_t              n_ = 0;
    std::vector<index_t> idx_;
    std::vector<char>    member_;
};

struct SymSkewSplit
{
    SquareMatrix symmetric;
    SquareMatrix skew;
};

SymSkewSplit split_symmetric_skew(const SquareMatrix &A);

SquareMatrix apply_givens(const SquareMatrix &A, const GivensRotation &G, RotationSide side);

// in-place kernels on dense storage; all other rows/columns are untouched
void rotate_rows(DenseMatrix &M, index_t i, index_t j, double c, double s);
void rotate_cols(DenseMatrix &M, index_t i, index_t j, double c, double s);

/// Angle in (-pi/4, pi/4] that diagonalizes [[g_ii, g_ij], [g_ij, g_jj]] under G^T M G.
double givens_from_gram2(double g_ii, double g_ij, double g_jj);

/// (a,b) entry = <A(rows[a], cols), A(rows[b], cols)>
DenseMatrix row_gram(const SquareMatrix &A, const IndexSet &rows, const IndexSet &cols);
/// (a,b) entry = <A(rows, cols[a]), A(rows, cols[b])>
DenseMatrix col_gram(const SquareMatrix &A, const IndexSet &rows, const IndexSet &cols);

/// ||A - B||_F / ||A||_F
double frobenius_relative_error(const SquareMatrix &A, const SquareMatrix &B);

/// Fraction of off-diagonal nonzeros (i,j) with A(j,i) == A(i,j) exactly.
double numerical_symmetry(const SquareMatrix &A);

}// namespace mmf
