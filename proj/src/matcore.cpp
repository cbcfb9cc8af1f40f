#include "mmf/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mmf {

namespace {

bool row_major_less(const Entry &a, const Entry &b)
{
    return a.row != b.row ? a.row < b.row : a.col < b.col;
}

void check_finite(double v)
{
    if (!std::isfinite(v))
        throw value_error("matrix values must be finite");
}

}// namespace

//
// SquareMatrix
//

SquareMatrix SquareMatrix::dense(DenseMatrix values)
{
    if (values.rows() != values.cols())
        throw dimension_error("matrix is not square: " + std::to_string(values.rows()) + " x "
                              + std::to_string(values.cols()));
    if (values.rows() < 1)
        throw dimension_error("matrix dimension must be positive");
    if (!values.allFinite())
        throw value_error("matrix values must be finite");

    SquareMatrix M;
    M.n_       = values.rows();
    M.storage_ = std::move(values);
    return M;
}

SquareMatrix SquareMatrix::sparse(index_t n, std::vector<Entry> entries)
{
    if (n < 1)
        throw dimension_error("matrix dimension must be positive");

    std::erase_if(entries, [](const Entry &e) { return e.value == 0.0; });
    for (const auto &e : entries)
    {
        if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
            throw dimension_error("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col)
                                  + ") out of range for n = " + std::to_string(n));
        check_finite(e.value);
    }
    std::sort(entries.begin(), entries.end(), row_major_less);
    auto dup = std::adjacent_find(entries.begin(), entries.end(),
                                  [](const Entry &a, const Entry &b) { return a.row == b.row && a.col == b.col; });
    if (dup != entries.end())
        throw value_error("duplicate coordinate (" + std::to_string(dup->row) + ", " + std::to_string(dup->col) + ")");

    SquareMatrix M;
    M.n_       = n;
    M.storage_ = std::move(entries);
    return M;
}

SquareMatrix SquareMatrix::zeros(index_t n)
{
    return sparse(n, {});
}

SquareMatrix SquareMatrix::identity(index_t n)
{
    std::vector<Entry> e;
    e.reserve(static_cast<std::size_t>(n));
    for (index_t k = 0; k < n; ++k)
        e.push_back({k, k, 1.0});
    return sparse(n, std::move(e));
}

std::size_t SquareMatrix::nnz() const
{
    if (is_dense())
    {
        const auto &D = std::get<DenseMatrix>(storage_);
        return static_cast<std::size_t>(std::count_if(D.data(), D.data() + D.size(), [](double v) { return v != 0.0; }));
    }
    return std::get<std::vector<Entry>>(storage_).size();
}

double SquareMatrix::density() const
{
    if (n_ == 0)
        return 0.0;
    return static_cast<double>(nnz()) / (static_cast<double>(n_) * static_cast<double>(n_));
}

double SquareMatrix::operator()(index_t i, index_t j) const
{
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw dimension_error("index out of range");
    if (is_dense())
        return std::get<DenseMatrix>(storage_)(i, j);

    const auto &e  = std::get<std::vector<Entry>>(storage_);
    auto        it = std::lower_bound(e.begin(), e.end(), Entry{i, j, 0.0}, row_major_less);
    return (it != e.end() && it->row == i && it->col == j) ? it->value : 0.0;
}

DenseMatrix SquareMatrix::to_dense() const
{
    if (is_dense())
        return std::get<DenseMatrix>(storage_);
    DenseMatrix D = DenseMatrix::Zero(n_, n_);
    for (const auto &e : std::get<std::vector<Entry>>(storage_))
        D(e.row, e.col) = e.value;
    return D;
}

std::vector<Entry> SquareMatrix::entries() const
{
    if (!is_dense())
        return std::get<std::vector<Entry>>(storage_);

    const auto        &D = std::get<DenseMatrix>(storage_);
    std::vector<Entry> e;
    for (index_t i = 0; i < n_; ++i)
        for (index_t j = 0; j < n_; ++j)
            if (D(i, j) != 0.0)
                e.push_back({i, j, D(i, j)});
    return e;
}

SquareMatrix SquareMatrix::to_sparse() const
{
    if (!is_dense())
        return *this;
    return sparse(n_, entries());
}

SquareMatrix SquareMatrix::transpose() const
{
    if (is_dense())
        return dense(std::get<DenseMatrix>(storage_).transpose());
    auto e = std::get<std::vector<Entry>>(storage_);
    for (auto &x : e)
        std::swap(x.row, x.col);
    return sparse(n_, std::move(e));
}

double SquareMatrix::frobenius_norm() const
{
    if (is_dense())
        return std::get<DenseMatrix>(storage_).norm();
    double s = 0.0;
    for (const auto &e : std::get<std::vector<Entry>>(storage_))
        s += e.value * e.value;
    return std::sqrt(s);
}

double SquareMatrix::max_abs() const
{
    if (is_dense())
    {
        const auto &D = std::get<DenseMatrix>(storage_);
        return D.size() ? D.cwiseAbs().maxCoeff() : 0.0;
    }
    double m = 0.0;
    for (const auto &e : std::get<std::vector<Entry>>(storage_))
        m = std::max(m, std::abs(e.value));
    return m;
}

const DenseMatrix &SquareMatrix::dense_values() const
{
    if (!is_dense())
        throw std::logic_error("matrix is stored sparse");
    return std::get<DenseMatrix>(storage_);
}

std::span<const Entry> SquareMatrix::sparse_entries() const
{
    if (is_dense())
        throw std::logic_error("matrix is stored dense");
    return std::get<std::vector<Entry>>(storage_);
}

//
// GivensRotation
//

GivensRotation::GivensRotation(index_t i, index_t j, double theta, index_t n)
    : i_(i), j_(j), theta_(theta), n_(n), c_(std::cos(theta)), s_(std::sin(theta))
{
    if (i == j)
        throw value_error("rotation indices must differ");
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw dimension_error("rotation index out of range");
    if (!std::isfinite(theta))
        throw value_error("rotation angle must be finite");
}

DenseMatrix GivensRotation::to_dense() const
{
    DenseMatrix G = DenseMatrix::Identity(n_, n_);
    G(i_, i_)     = c_;
    G(j_, j_)     = c_;
    G(i_, j_)     = -s_;
    G(j_, i_)     = s_;
    return G;
}

//
// IndexSet
//

IndexSet::IndexSet(index_t n, std::vector<index_t> indices)
    : n_(n), idx_(std::move(indices)), member_(static_cast<std::size_t>(std::max<index_t>(n, 0)), 0)
{
    for (auto k : idx_)
    {
        if (k < 0 || k >= n)
            throw dimension_error("index " + std::to_string(k) + " out of range for n = " + std::to_string(n));
        if (member_[static_cast<std::size_t>(k)])
            throw value_error("duplicate index " + std::to_string(k) + " in index set");
        member_[static_cast<std::size_t>(k)] = 1;
    }
}

IndexSet IndexSet::all(index_t n)
{
    std::vector<index_t> v(static_cast<std::size_t>(n));
    for (index_t k = 0; k < n; ++k)
        v[static_cast<std::size_t>(k)] = k;
    return {n, std::move(v)};
}

IndexSet IndexSet::complement() const
{
    std::vector<index_t> v;
    for (index_t k = 0; k < n_; ++k)
        if (!member_[static_cast<std::size_t>(k)])
            v.push_back(k);
    return {n_, std::move(v)};
}

//
// operations
//

SymSkewSplit split_symmetric_skew(const SquareMatrix &A)
{
    const index_t n = A.size();

    if (A.is_dense())
    {
        const auto &D = A.dense_values();
        DenseMatrix S(n, n), K(n, n);
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < n; ++j)
            {
                S(i, j) = 0.5 * (D(i, j) + D(j, i));
                K(i, j) = 0.5 * (D(i, j) - D(j, i));
            }
        return {SquareMatrix::dense(std::move(S)), SquareMatrix::dense(std::move(K))};
    }

    // merge A and A^T over the union pattern
    auto               a = A.entries();
    std::vector<Entry> t = a;
    for (auto &e : t)
        std::swap(e.row, e.col);
    std::sort(t.begin(), t.end(), row_major_less);

    std::vector<Entry> s, k;
    std::size_t        p = 0, q = 0;
    while (p < a.size() || q < t.size())
    {
        index_t i, j;
        double  aij = 0.0, aji = 0.0;
        if (q >= t.size() || (p < a.size() && row_major_less(a[p], t[q])))
        {
            i = a[p].row, j = a[p].col, aij = a[p].value;
            ++p;
        }
        else if (p >= a.size() || row_major_less(t[q], a[p]))
        {
            i = t[q].row, j = t[q].col, aji = t[q].value;
            ++q;
        }
        else
        {
            i = a[p].row, j = a[p].col, aij = a[p].value, aji = t[q].value;
            ++p, ++q;
        }
        s.push_back({i, j, 0.5 * (aij + aji)});
        k.push_back({i, j, 0.5 * (aij - aji)});
    }
    return {SquareMatrix::sparse(n, std::move(s)), SquareMatrix::sparse(n, std::move(k))};
}

void rotate_rows(DenseMatrix &M, index_t i, index_t j, double c, double s)
{
    const index_t m  = M.cols();
    double       *ri = M.data() + i * m;
    double       *rj = M.data() + j * m;
    for (index_t k = 0; k < m; ++k)
    {
        const double x = ri[k], y = rj[k];
        ri[k]          = c * x + s * y;
        rj[k]          = -s * x + c * y;
    }
}

void rotate_cols(DenseMatrix &M, index_t i, index_t j, double c, double s)
{
    const index_t m = M.cols();
    for (index_t r = 0; r < M.rows(); ++r)
    {
        double      *row = M.data() + r * m;
        const double x = row[i], y = row[j];
        row[i]         = c * x + s * y;
        row[j]         = -s * x + c * y;
    }
}

SquareMatrix apply_givens(const SquareMatrix &A, const GivensRotation &G, RotationSide side)
{
    if (G.dimension() != A.size())
        throw dimension_error("rotation dimension " + std::to_string(G.dimension()) + " does not match matrix dimension "
                              + std::to_string(A.size()));

    const index_t i = G.i(), j = G.j();
    const double  c = G.cos(), s = G.sin();

    if (A.is_dense())
    {
        DenseMatrix D = A.dense_values();
        if (side == RotationSide::left_transpose)
            rotate_rows(D, i, j, c, s);
        else
            rotate_cols(D, i, j, c, s);
        return SquareMatrix::dense(std::move(D));
    }

    // sparse: rebuild the two touched rows (or columns) over their union pattern
    const bool         by_row = side == RotationSide::left_transpose;
    std::vector<Entry> keep, xi, xj;
    for (const auto &e : A.sparse_entries())
    {
        const index_t major = by_row ? e.row : e.col;
        if (major == i)
            xi.push_back(e);
        else if (major == j)
            xj.push_back(e);
        else
            keep.push_back(e);
    }

    auto minor = [by_row](const Entry &e) { return by_row ? e.col : e.row; };
    auto key   = [&](const Entry &a, const Entry &b) { return minor(a) < minor(b); };
    std::sort(xi.begin(), xi.end(), key);
    std::sort(xj.begin(), xj.end(), key);

    auto emit = [&](index_t major, index_t mn, double v) {
        if (by_row)
            keep.push_back({major, mn, v});
        else
            keep.push_back({mn, major, v});
    };

    std::size_t p = 0, q = 0;
    while (p < xi.size() || q < xj.size())
    {
        index_t mn;
        double  x = 0.0, y = 0.0;
        if (q >= xj.size() || (p < xi.size() && minor(xi[p]) < minor(xj[q])))
            mn = minor(xi[p]), x = xi[p++].value;
        else if (p >= xi.size() || minor(xj[q]) < minor(xi[p]))
            mn = minor(xj[q]), y = xj[q++].value;
        else
            mn = minor(xi[p]), x = xi[p++].value, y = xj[q++].value;

        emit(i, mn, c * x + s * y);
        emit(j, mn, -s * x + c * y);
    }
    return SquareMatrix::sparse(A.size(), std::move(keep));
}

double givens_from_gram2(double g_ii, double g_ij, double g_jj)
{
    if (g_ij == 0.0)
        return 0.0;

    double theta = 0.5 * std::atan2(2.0 * g_ij, g_ii - g_jj);   // (-pi/2, pi/2]
    constexpr double quarter = std::numbers::pi / 4;
    if (theta > quarter)
        theta -= 2 * quarter;
    else if (theta <= -quarter)
        theta += 2 * quarter;
    return theta;
}

namespace {

DenseMatrix gather(const SquareMatrix &A, const IndexSet &rows, const IndexSet &cols)
{
    if (rows.dimension() != A.size() || cols.dimension() != A.size())
        throw dimension_error("index set dimension does not match matrix");
    if (rows.empty() || cols.empty())
        throw dimension_error("Gram matrix of an empty index set");

    DenseMatrix X(rows.size(), cols.size());
    if (A.is_dense())
    {
        const auto &D = A.dense_values();
        for (index_t a = 0; a < rows.size(); ++a)
            for (index_t b = 0; b < cols.size(); ++b)
                X(a, b) = D(rows[a], cols[b]);
        return X;
    }

    X.setZero();
    std::vector<index_t> rpos(static_cast<std::size_t>(A.size()), -1), cpos(static_cast<std::size_t>(A.size()), -1);
    for (index_t a = 0; a < rows.size(); ++a)
        rpos[static_cast<std::size_t>(rows[a])] = a;
    for (index_t b = 0; b < cols.size(); ++b)
        cpos[static_cast<std::size_t>(cols[b])] = b;
    for (const auto &e : A.sparse_entries())
    {
        const auto a = rpos[static_cast<std::size_t>(e.row)], b = cpos[static_cast<std::size_t>(e.col)];
        if (a >= 0 && b >= 0)
            X(a, b) = e.value;
    }
    return X;
}

}// namespace

DenseMatrix row_gram(const SquareMatrix &A, const IndexSet &rows, const IndexSet &cols)
{
    const DenseMatrix X = gather(A, rows, cols);
    DenseMatrix       G = X * X.transpose();
    // exact symmetry
    for (index_t a = 0; a < G.rows(); ++a)
        for (index_t b = a + 1; b < G.cols(); ++b)
            G(b, a) = G(a, b);
    return G;
}

DenseMatrix col_gram(const SquareMatrix &A, const IndexSet &rows, const IndexSet &cols)
{
    const DenseMatrix X = gather(A, rows, cols);
    DenseMatrix       G = X.transpose() * X;
    for (index_t a = 0; a < G.rows(); ++a)
        for (index_t b = a + 1; b < G.cols(); ++b)
            G(b, a) = G(a, b);
    return G;
}

double frobenius_relative_error(const SquareMatrix &A, const SquareMatrix &B)
{
    if (A.size() != B.size())
        throw dimension_error("matrices differ in dimension");
    const double na = A.frobenius_norm();
    if (na == 0.0)
        throw value_error("relative error against a zero matrix");

    if (A.is_dense() || B.is_dense())
        return (A.to_dense() - B.to_dense()).norm() / na;

    // both sparse: merge sorted entry lists
    auto   a = A.sparse_entries();
    auto   b = B.sparse_entries();
    double s = 0.0;
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size())
    {
        double d;
        if (q >= b.size() || (p < a.size() && row_major_less(a[p], b[q])))
            d = a[p++].value;
        else if (p >= a.size() || row_major_less(b[q], a[p]))
            d = -b[q++].value;
        else
            d = a[p++].value - b[q++].value;
        s += d * d;
    }
    return std::sqrt(s) / na;
}

double numerical_symmetry(const SquareMatrix &A)
{
    std::size_t offdiag = 0, matched = 0;
    if (A.is_dense())
    {
        const auto &D = A.dense_values();
        for (index_t i = 0; i < A.size(); ++i)
            for (index_t j = 0; j < A.size(); ++j)
                if (i != j && D(i, j) != 0.0)
                {
                    ++offdiag;
                    matched += D(j, i) == D(i, j);
                }
    }
    else
    {
        for (const auto &e : A.sparse_entries())
            if (e.row != e.col)
            {
                ++offdiag;
                matched += A(e.col, e.row) == e.value;
            }
    }
    return offdiag == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(offdiag);
}

}// namespace mmf
