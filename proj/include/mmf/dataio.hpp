#pragma once
//
// Matrix Market I/O, SuiteSparse collection download with an on-disk cache,
// and seeded synthetic matrices.
//

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mmf/matcore.hpp"

namespace mmf {

struct MatrixMetadata
{
    std::string name;
    std::string group;
    index_t     n   = 0;
    std::size_t nnz = 0;
    std::string kind;
    double      numerical_symmetry = 1.0;
};

class parse_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class not_square_error : public parse_error
{
public:
    using parse_error::parse_error;
};

struct ParsedMatrix
{
    SquareMatrix   matrix;
    MatrixMetadata meta;
};

/// Coordinate real general / symmetric / skew-symmetric. Name, group and kind
/// come from "% name: group/name" and "% kind: ..." comment lines when present.
ParsedMatrix parse_matrix_market(std::string_view text);
ParsedMatrix read_matrix_market(const std::filesystem::path &file);

/// General coordinate real, 1-based, 17 significant digits.
std::string write_matrix_market(const SquareMatrix &A, std::string_view comment = {});

struct MatrixRef
{
    std::string group;
    std::string name;

    std::string id() const { return group + "/" + name; }
    friend bool operator==(const MatrixRef &, const MatrixRef &) = default;
};

/// "group/name" -> MatrixRef; throws std::invalid_argument on anything else.
MatrixRef parse_matrix_ref(std::string_view text);

/// One "group/name" per line; blank lines and '#' comments ignored.
std::vector<MatrixRef> read_manifest(const std::filesystem::path &file);

//
// Download
//

class fetch_error : public std::runtime_error
{
public:
    enum class Kind
    {
        not_found,
        network,
        corrupt,
        not_square
    };

    fetch_error(Kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct FetchOptions
{
    std::filesystem::path cache_dir = "data/suitesparse";
    std::string           base_url  = "https://sparse.tamu.edu/MM";
    int                   attempts  = 3;
    double                backoff_s = 0.5;   // doubled after every failed attempt
    long                  timeout_s = 60;
};

/// Counters for tests and logging; the fetcher itself has no other state.
struct FetchStats
{
    int requests = 0;
    int cache_hits = 0;
};

/// Returns the cached file if present, else downloads base_url/group/name.tar.gz,
/// extracts name/name.mtx, writes it atomically into cache_dir/group/name.mtx.
ParsedMatrix fetch_suitesparse(const MatrixRef &ref, const FetchOptions &opts = {}, FetchStats *stats = nullptr);

/// gzip inflate and ustar member lookup, exposed for tests
std::string gunzip(std::string_view compressed);
/// contents of the regular member whose base name is member_name
std::string tar_extract(std::string_view archive, std::string_view member_name);

//
// Synthetic matrices
//

SquareMatrix gen_random_orthogonal(index_t n, std::uint64_t seed);

struct DecaySpec
{
    index_t       n    = 200;
    double        t    = 1.0;
    std::uint64_t seed = 0;
};

/// (1 - e^{t(x-1)}) / (1 - e^t) on x_k = k / (n - 1)
std::vector<double> decay_spectrum(index_t n, double t);
/// Q diag(decay_spectrum) Q^T with Q = gen_random_orthogonal(n, seed)
SquareMatrix gen_decay_matrix(const DecaySpec &spec);

/// i.i.d. standard normal entries
SquareMatrix gen_gaussian(index_t n, std::uint64_t seed);
SquareMatrix gen_symmetric(index_t n, std::uint64_t seed);
SquareMatrix gen_skew(index_t n, std::uint64_t seed);
/// X Y^T with X, Y n x r Gaussian
SquareMatrix gen_low_rank(index_t n, index_t r, std::uint64_t seed);

/// Rank-4 dense component + nested block component + small Gaussian noise.
SquareMatrix gen_mixed_structure(index_t n, std::uint64_t seed);

}// namespace mmf
