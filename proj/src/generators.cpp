#include <cmath>

#include <Eigen/QR>

#include "mmf/dataio.hpp"
#include "mmf/random.hpp"

namespace mmf {

namespace {

DenseMatrix gaussian(index_t rows, index_t cols, Rng &rng)
{
    DenseMatrix G(rows, cols);
    for (index_t i = 0; i < rows; ++i)
        for (index_t j = 0; j < cols; ++j)
            G(i, j) = rng.normal();
    return G;
}

}// namespace

SquareMatrix gen_random_orthogonal(index_t n, std::uint64_t seed)
{
    if (n < 1)
        throw dimension_error("gen_random_orthogonal: n must be positive");
    Rng                              rng(seed);
    const Eigen::MatrixXd            G = gaussian(n, n, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd                  Q = qr.householderQ();
    const Eigen::MatrixXd           &R = qr.matrixQR();
    // sign fix makes Q a function of G alone
    for (index_t k = 0; k < n; ++k)
        if (R(k, k) < 0)
            Q.col(k) *= -1.0;
    return SquareMatrix::dense(DenseMatrix(Q));
}

std::vector<double> decay_spectrum(index_t n, double t)
{
    if (n < 2)
        throw value_error("decay spectrum needs n >= 2");
    if (!std::isfinite(t) || t == 0.0)
        throw value_error("decay coefficient t must be finite and nonzero");
    if (t < 0.0)
        throw value_error("decay coefficient t must be positive");

    std::vector<double> d(static_cast<std::size_t>(n));
    const double        denom = std::expm1(t);   // -(1 - e^t)
    for (index_t k = 0; k < n; ++k)
    {
        const double x = static_cast<double>(k) / static_cast<double>(n - 1);
        d[static_cast<std::size_t>(k)] = std::expm1(t * (x - 1.0)) / denom;
    }
    return d;
}

SquareMatrix gen_decay_matrix(const DecaySpec &spec)
{
    const auto        d = decay_spectrum(spec.n, spec.t);
    const DenseMatrix Q = gen_random_orthogonal(spec.n, spec.seed).dense_values();
    Eigen::VectorXd   D(spec.n);
    for (index_t k = 0; k < spec.n; ++k)
        D(k) = d[static_cast<std::size_t>(k)];
    DenseMatrix M = Q * D.asDiagonal() * Q.transpose();
    M             = (0.5 * (M + M.transpose())).eval();
    return SquareMatrix::dense(std::move(M));
}

SquareMatrix gen_gaussian(index_t n, std::uint64_t seed)
{
    Rng rng(seed);
    return SquareMatrix::dense(gaussian(n, n, rng));
}

SquareMatrix gen_symmetric(index_t n, std::uint64_t seed)
{
    Rng         rng(seed);
    DenseMatrix G = gaussian(n, n, rng);
    return SquareMatrix::dense((0.5 * (G + G.transpose())).eval());
}

SquareMatrix gen_skew(index_t n, std::uint64_t seed)
{
    Rng         rng(seed);
    DenseMatrix G = gaussian(n, n, rng);
    return SquareMatrix::dense((0.5 * (G - G.transpose())).eval());
}

SquareMatrix gen_low_rank(index_t n, index_t r, std::uint64_t seed)
{
    if (r < 1 || r > n)
        throw value_error("gen_low_rank: rank out of range");
    Rng               rng(seed);
    const DenseMatrix X = gaussian(n, r, rng);
    const DenseMatrix Y = gaussian(n, r, rng);
    return SquareMatrix::dense(X * Y.transpose());
}

SquareMatrix gen_mixed_structure(index_t n, std::uint64_t seed)
{
    if (n < 8)
        throw value_error("gen_mixed_structure needs n >= 8");
    Rng rng(seed);

    const DenseMatrix X = gaussian(n, 4, rng);
    const DenseMatrix Y = gaussian(n, 4, rng);
    DenseMatrix       M = X * Y.transpose() / std::sqrt(static_cast<double>(n));

    // nested diagonal blocks, each level half the block size and half the weight
    double scale = 1.0;
    for (index_t size = n / 2; size >= 8; size /= 2, scale *= 0.5)
        for (index_t b = 0; b + size <= n; b += size)
        {
            const double c = scale * rng.normal();
            M.block(b, b, size, size).array() += c;
        }
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            M(i, j) += 1e-3 * rng.normal();
    return SquareMatrix::dense(std::move(M));
}

}// namespace mmf
