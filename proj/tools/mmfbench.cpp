// mmfbench: benchmark driver for the multiresolution factorizations.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmf/bench.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRunError    = 1;

void write_file(const std::string &path, const std::string &text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw std::runtime_error("cannot write " + path);
}

// "group/name" from the cache, a path to a .mtx file, or "synthetic/mixed<n>"
mmf::ParsedMatrix load_matrix(const std::string &name, const mmf::FetchOptions &fo, std::uint64_t seed)
{
    const std::string synth = "synthetic/mixed";
    if (name.rfind(synth, 0) == 0)
    {
        const auto        n = static_cast<mmf::index_t>(std::stol(name.substr(synth.size())));
        mmf::ParsedMatrix pm;
        pm.matrix    = mmf::gen_mixed_structure(n, seed);
        pm.meta.group = "synthetic";
        pm.meta.name  = "mixed" + std::to_string(n);
        pm.meta.n     = n;
        pm.meta.nnz   = pm.matrix.nnz();
        pm.meta.kind  = "synthetic";
        pm.meta.numerical_symmetry = mmf::numerical_symmetry(pm.matrix);
        return pm;
    }
    if (std::filesystem::exists(name))
        return mmf::read_matrix_market(name);
    return mmf::fetch_suitesparse(mmf::parse_matrix_ref(name), fo);
}

}// namespace

int main(int argc, char **argv)
{
    CLI::App app{"Multiresolution matrix factorization benchmark"};
    app.require_subcommand(1);

    std::string cache_dir = "data/suitesparse";
    std::string base_url  = mmf::FetchOptions{}.base_url;
    app.add_option("--cache-dir", cache_dir, "matrix cache directory")->capture_default_str();
    app.add_option("--base-url", base_url, "collection download root")->capture_default_str();

    // fetch
    auto       *fetch = app.add_subcommand("fetch", "download every matrix in a manifest into the cache");
    std::string manifest;
    fetch->add_option("manifest", manifest, "file with one group/name per line")->required();

    // sweep
    auto       *sweep = app.add_subcommand("sweep", "compression sweep with win-rate tables");
    std::string config_path;
    sweep->add_option("--config", config_path, "key=value sweep configuration")->required();

    // decay
    auto               *decay = app.add_subcommand("decay", "symmetric MMF error against spectral decay rate");
    mmf::index_t        decay_n = 200, decay_core = 10;
    std::vector<double> t_list{1, 2, 4, 6, 8, 10};
    std::uint64_t       seed = 0;
    std::string         out_path;
    decay->add_option("--n", decay_n)->capture_default_str();
    decay->add_option("--t-list", t_list)->delimiter(',')->capture_default_str();
    decay->add_option("--core", decay_core, "core size")->capture_default_str();
    decay->add_option("--seed", seed)->capture_default_str();
    decay->add_option("--out", out_path, "CSV output ('-' for stdout)")->required();

    // rankscan
    auto                     *rankscan = app.add_subcommand("rankscan", "hybrid CUR+MMF error per CUR rank");
    std::string               matrix;
    std::vector<mmf::index_t> r_list;
    double                    fraction   = 0.05;
    std::string               accounting = "sparse-coo";
    int                       trials     = 1;
    rankscan->add_option("--matrix", matrix, "group/name, .mtx path or synthetic/mixed<n>")->required();
    rankscan->add_option("--r-list", r_list)->delimiter(',')->required();
    rankscan->add_option("--fraction", fraction)->capture_default_str();
    rankscan->add_option("--accounting", accounting)->capture_default_str();
    rankscan->add_option("--trials", trials)->capture_default_str();
    rankscan->add_option("--seed", seed)->capture_default_str();
    rankscan->add_option("--out", out_path)->required();

    // factor
    auto        *factor = app.add_subcommand("factor", "compress one matrix with one method");
    std::string  method;
    mmf::index_t rank = 0;
    factor->add_option("--matrix", matrix, "group/name, .mtx path or synthetic/mixed<n>")->required();
    factor->add_option("--method", method)
        ->required()
        ->check(CLI::IsMember({"additive", "direct-corediag", "direct-topn", "direct-greedytopn", "cur", "hybrid"}));
    factor->add_option("--fraction", fraction)->required();
    factor->add_option("--accounting", accounting)->capture_default_str();
    factor->add_option("--rank", rank, "CUR rank for the hybrid method");
    factor->add_option("--seed", seed)->capture_default_str();
    factor->add_option("--out", out_path, "JSON output ('-' for stdout)")->required();

    CLI11_PARSE(app, argc, argv);

    mmf::FetchOptions fo;
    fo.cache_dir = cache_dir;
    fo.base_url  = base_url;

    try
    {
        if (*fetch)
        {
            std::vector<mmf::MatrixRef> refs;
            try
            {
                refs = mmf::read_manifest(manifest);
            }
            catch (const std::invalid_argument &e)
            {
                std::cerr << "error: " << e.what() << "\n";
                return kConfigError;
            }
            int failed = 0;
            for (const auto &ref : refs)
            {
                try
                {
                    const auto pm = mmf::fetch_suitesparse(ref, fo);
                    std::printf("%s n=%td nnz=%zu symmetry=%.4f kind=%s\n", ref.id().c_str(), pm.meta.n, pm.meta.nnz,
                                pm.meta.numerical_symmetry, pm.meta.kind.c_str());
                }
                catch (const std::exception &e)
                {
                    std::fprintf(stderr, "%s: %s\n", ref.id().c_str(), e.what());
                    ++failed;
                }
            }
            return failed ? kRunError : 0;
        }

        if (*sweep)
        {
            mmf::SweepConfig cfg;
            try
            {
                cfg = mmf::load_sweep_config(config_path);
                (void)mmf::read_manifest(cfg.manifest);
            }
            catch (const std::invalid_argument &e)
            {
                std::cerr << "error: " << e.what() << "\n";
                return kConfigError;
            }
            const auto result = mmf::run_sweep(cfg);
            mmf::write_sweep_outputs(cfg, result);
            std::cout << mmf::win_table_text(result.win_table);
            for (const auto &f : result.failures)
                std::cout << "skipped " << f.matrix << ": " << f.message << "\n";
            return 0;
        }

        if (*decay)
        {
            const auto points = mmf::run_decay_sweep(decay_n, t_list, seed, decay_core);
            write_file(out_path, mmf::decay_csv(points));
            return 0;
        }

        mmf::StorageBudget budget;
        try
        {
            budget = {fraction, mmf::parse_accounting(accounting)};
        }
        catch (const std::invalid_argument &e)
        {
            std::cerr << "error: " << e.what() << "\n";
            return kConfigError;
        }

        if (*rankscan)
        {
            const auto pm    = load_matrix(matrix, fo, seed);
            const auto sweep = mmf::run_rank_sweep(pm.matrix, r_list, budget, seed, trials);
            write_file(out_path, mmf::rank_sweep_csv(sweep));
            return 0;
        }

        if (*factor)
        {
            const auto pm = load_matrix(matrix, fo, seed);
            const auto m  = mmf::parse_method(method);
            if (m == mmf::Method::hybrid && rank == 0)
                rank = std::min<mmf::index_t>(pm.matrix.size(), 2 * mmf::solve_core_size(pm.matrix, mmf::Method::cur, budget).d);
            const auto run = mmf::run_method(pm.matrix, m, budget, seed, rank);

            nlohmann::ordered_json j;
            j["matrix"]     = pm.meta.group.empty() ? matrix : pm.meta.group + "/" + pm.meta.name;
            j["n"]          = pm.meta.n;
            j["nnz"]        = pm.meta.nnz;
            j["method"]     = method;
            j["fraction"]   = fraction;
            j["accounting"] = accounting;
            j["seed"]       = seed;
            j["feasible"]   = run.feasible;
            j["core"]       = run.d;
            if (m == mmf::Method::hybrid)
                j["cur_rank"] = run.r;
            j["storage"] = run.storage;
            j["budget"]  = run.budget;
            if (run.feasible)
                j["error"] = run.error;
            else
                j["error"] = nullptr;
            write_file(out_path, j.dump(2) + "\n");
            return run.feasible ? 0 : kRunError;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kRunError;
    }
    return 0;
}
