#pragma once
//
// Benchmark harness: one entry point per method under a shared storage budget,
// compression sweeps over a manifest with win-rate tables, the decay sweep and
// the CUR-rank sweep.
//

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>

#include "mmf/dataio.hpp"
#include "mmf/mmf_additive.hpp"

namespace mmf {

struct MethodRun
{
    Method      method   = Method::cur;
    bool        feasible = false;   // false: the budget cannot hold any factorization
    double      error    = 0.0;
    index_t     d        = 0;       // core size, or CUR rank for cur
    index_t     r        = 0;       // CUR rank for hybrid
    std::size_t storage  = 0;
    std::size_t budget   = 0;       // scalars; 0 under the rank ruler
};

/// Factorize A with one method at the given budget and report the relative error.
/// hybrid_rank is required for Method::hybrid.
MethodRun run_method(const SquareMatrix &A, Method method, const StorageBudget &budget, std::uint64_t seed,
                     index_t hybrid_rank = 0);

struct CompressionReport
{
    MatrixMetadata      matrix;
    std::string         method;
    double              fraction    = 0.0;
    int                 trials      = 0;
    double              mean_error  = 0.0;
    double              std_error   = 0.0;
    double              wall_time_s = 0.0;
    bool                feasible    = true;
    std::vector<double> errors;
};

struct SweepConfig
{
    std::filesystem::path    manifest;
    std::filesystem::path    cache_dir = "data/suitesparse";
    std::string              base_url  = "https://sparse.tamu.edu/MM";
    std::vector<std::string> methods   = {"additive", "direct-greedytopn", "cur"};
    std::vector<double>      fractions = {0.01, 0.10, 0.25, 0.50, 0.75};
    int                      trials    = 3;
    std::uint64_t            seed      = 0;
    std::filesystem::path    output    = "sweep";   // writes <output>.csv, <output>.json, <output>_winrate.csv
    Accounting               accounting = Accounting::sparse_coo;
    std::string              baseline   = "cur";
    int                      threads    = 0;       // 0: hardware concurrency
    bool                     timing     = true;    // include wall_time_s in the JSON
    int                      hybrid_rank = 0;      // CUR rank for the hybrid method; 0 picks 2x the budget rank
};

/// key=value lines; lists are comma separated; '#' starts a comment.
SweepConfig parse_sweep_config(std::istream &in);
SweepConfig load_sweep_config(const std::filesystem::path &file);

struct WinRow
{
    std::string kind;      // matrix kind, or "total wins"
    std::string method;
    double      fraction = 0.0;
    int         matrices = 0;
    double      win_pct = 0.0, loss_pct = 0.0, tie_pct = 0.0;
};

struct SweepFailure
{
    std::string matrix;
    std::string message;
};

struct SweepResult
{
    std::vector<CompressionReport> reports;
    std::vector<WinRow>            win_table;
    std::vector<SweepFailure>      failures;
    std::string                    per_run_csv;
};

/// Matrices are given explicitly; run_sweep(config) loads them through the fetcher.
SweepResult run_sweep(const SweepConfig &config, const std::vector<ParsedMatrix> &matrices);
SweepResult run_sweep(const SweepConfig &config);

/// Relative tolerance under which two mean errors count as a tie.
inline constexpr double kTieTolerance = 1e-12;

std::vector<WinRow> win_rate_table(const std::vector<CompressionReport> &reports, const std::string &baseline);

std::string reports_json(const std::vector<CompressionReport> &reports, const std::vector<SweepFailure> &failures,
                         bool timing);
std::string win_table_csv(const std::vector<WinRow> &rows);
/// aligned text rendering, one block per (method, fraction) column set
std::string win_table_text(const std::vector<WinRow> &rows);

void write_sweep_outputs(const SweepConfig &config, const SweepResult &result);

struct DecayPoint
{
    double t     = 0.0;
    double error = 0.0;
};

std::vector<DecayPoint> run_decay_sweep(index_t n, const std::vector<double> &t_list, std::uint64_t seed,
                                        index_t core_size = 10);
std::string             decay_csv(const std::vector<DecayPoint> &points);

struct RankSweep
{
    std::vector<std::pair<index_t, double>> hybrid;   // (r, error)
    double                                  cur_only = 0.0;
    double                                  mmf_only = 0.0;
    index_t                                 cur_rank  = 0;
    index_t                                 core_size = 0;
};

/// Hybrid error per CUR rank plus CUR-only and direct-MMF-only references, all at one budget.
RankSweep   run_rank_sweep(const SquareMatrix &A, const std::vector<index_t> &r_list, const StorageBudget &budget,
                           std::uint64_t seed, int trials = 1);
std::string rank_sweep_csv(const RankSweep &sweep);

}// namespace mmf
