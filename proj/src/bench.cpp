#include "mmf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace mmf {

namespace {

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

Sparsifier sparsifier_for(Method m, index_t n, index_t d)
{
    switch (m)
    {
    case Method::direct_core_diagonal: return {SparsifierKind::core_diagonal, 0};
    case Method::direct_top_n: return {SparsifierKind::top_n, n - d};
    default: return {SparsifierKind::greedy_top_n, n - d};
    }
}

void check_budget(const MethodRun &run, const StorageBudget &budget)
{
    if (budget.accounting != Accounting::rank && run.storage > run.budget)
        throw std::logic_error(to_string(run.method) + " used " + std::to_string(run.storage) + " scalars, budget "
                               + std::to_string(run.budget));
}

}// namespace

MethodRun run_method(const SquareMatrix &A, Method method, const StorageBudget &budget, std::uint64_t seed,
                     index_t hybrid_rank)
{
    const index_t n = A.size();
    MethodRun     run;
    run.method = method;
    run.budget = budget.accounting == Accounting::rank ? 0 : budget.scalars(A);

    FactorOptions opts;
    opts.seed = seed;

    try
    {
        switch (method)
        {
        case Method::cur:
        {
            const auto choice = solve_core_size(A, Method::cur, budget);
            const auto f      = cur_decompose(A, choice.d, seed);
            run.d             = choice.d;
            run.storage       = cur_storage(f);
            run.error         = frobenius_relative_error(A, SquareMatrix::dense(f.product()));
            break;
        }
        case Method::additive:
        {
            const auto F = factor_additive(A, budget, seed);
            run.d        = F.sym.core_set.size() + F.skew.core_set.size();
            run.storage  = method_storage(F);
            run.error    = frobenius_relative_error(A, reconstruct_additive(F));
            break;
        }
        case Method::symmetric:
        {
            const auto choice = solve_core_size(A, method, budget);
            const auto F      = factor_symmetric(A, choice.d, opts);
            run.d             = choice.d;
            run.storage       = method_storage(F);
            run.error         = frobenius_relative_error(A, reconstruct_sym(F));
            break;
        }
        case Method::skew:
        {
            const auto choice = solve_core_size(A, method, budget);
            const auto F      = factor_skew(A, choice.d, opts);
            run.d             = choice.d;
            run.storage       = method_storage(F);
            run.error         = frobenius_relative_error(A, reconstruct_skew(F));
            break;
        }
        case Method::direct_core_diagonal:
        case Method::direct_top_n:
        case Method::direct_greedy_top_n:
        {
            const auto choice = solve_core_size(A, method, budget);
            const auto F      = factor_direct(A, choice.d, sparsifier_for(method, n, choice.d), opts);
            run.d             = choice.d;
            run.storage       = method_storage(F);
            run.error         = frobenius_relative_error(A, reconstruct_direct(F));
            break;
        }
        case Method::hybrid:
        {
            if (hybrid_rank < 1 || hybrid_rank > n)
                throw value_error("hybrid needs a CUR rank in [1, n]");
            const auto choice = solve_core_size(A, Method::hybrid, budget);
            const auto res    = hybrid_compress(A, hybrid_rank, choice.d, seed);
            run.d             = choice.d;
            run.r             = hybrid_rank;
            run.storage       = method_storage(res.factor);
            run.error         = res.error;
            break;
        }
        }
    }
    catch (const budget_error &)
    {
        run.feasible = false;
        return run;
    }
    run.feasible = true;
    check_budget(run, budget);
    return run;
}

//
// configuration
//

namespace {

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream        ss(s);
    std::string              item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

double to_double(const std::string &key, const std::string &v)
{
    std::size_t pos = 0;
    double      x   = 0.0;
    try
    {
        x = std::stod(v, &pos);
    }
    catch (const std::exception &)
    {
        pos = 0;
    }
    if (pos != v.size() || v.empty())
        throw std::invalid_argument("config key '" + key + "': not a number: '" + v + "'");
    return x;
}

long long to_int(const std::string &key, const std::string &v)
{
    const double x = to_double(key, v);
    if (x != std::floor(x))
        throw std::invalid_argument("config key '" + key + "': not an integer: '" + v + "'");
    return static_cast<long long>(x);
}

bool to_bool(const std::string &key, const std::string &v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw std::invalid_argument("config key '" + key + "': not a boolean: '" + v + "'");
}

}// namespace

SweepConfig parse_sweep_config(std::istream &in)
{
    SweepConfig cfg;
    bool        have_manifest = false;
    std::string line;
    int         line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
        const auto key = trim(line.substr(0, eq));
        const auto val = trim(line.substr(eq + 1));

        if (key == "manifest")
            cfg.manifest = val, have_manifest = true;
        else if (key == "cache_dir")
            cfg.cache_dir = val;
        else if (key == "base_url")
            cfg.base_url = val;
        else if (key == "methods")
            cfg.methods = split_list(val);
        else if (key == "fractions")
        {
            cfg.fractions.clear();
            for (const auto &f : split_list(val))
                cfg.fractions.push_back(to_double(key, f));
        }
        else if (key == "trials")
            cfg.trials = static_cast<int>(to_int(key, val));
        else if (key == "seed")
        {
            const auto s = to_int(key, val);
            if (s < 0)
                throw std::invalid_argument("config key 'seed' must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(s);
        }
        else if (key == "output")
            cfg.output = val;
        else if (key == "accounting")
            cfg.accounting = parse_accounting(val);
        else if (key == "baseline")
            cfg.baseline = val;
        else if (key == "threads")
            cfg.threads = static_cast<int>(to_int(key, val));
        else if (key == "timing")
            cfg.timing = to_bool(key, val);
        else if (key == "hybrid_rank")
            cfg.hybrid_rank = static_cast<int>(to_int(key, val));
        else
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }

    if (!have_manifest)
        throw std::invalid_argument("config: 'manifest' is required");
    if (cfg.methods.empty() || cfg.fractions.empty())
        throw std::invalid_argument("config: methods and fractions must be non-empty");
    for (const auto &m : cfg.methods)
        parse_method(m);
    if (std::find(cfg.methods.begin(), cfg.methods.end(), cfg.baseline) == cfg.methods.end())
        throw std::invalid_argument("config: baseline '" + cfg.baseline + "' is not among the methods");
    for (double f : cfg.fractions)
        if (!(f > 0.0 && f <= 1.0))
            throw std::invalid_argument("config: fractions must lie in (0, 1]");
    if (cfg.trials < 1)
        throw std::invalid_argument("config: trials must be at least 1");
    if (cfg.threads < 0 || cfg.hybrid_rank < 0)
        throw std::invalid_argument("config: threads and hybrid_rank must be nonnegative");
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path &file)
{
    std::ifstream in(file);
    if (!in)
        throw std::invalid_argument("cannot open config " + file.string());
    return parse_sweep_config(in);
}

//
// sweep
//

namespace {

template <class F>
void parallel_for(std::size_t count, int threads, F &&body)
{
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers          = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));

    std::atomic<std::size_t> next{0};
    auto                     loop = [&] {
        for (std::size_t k = next++; k < count; k = next++)
            body(k);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(loop);
    loop();
    for (auto &t : pool)
        t.join();
}

std::string kind_of(const MatrixMetadata &m)
{
    return m.kind.empty() ? "unlabeled" : m.kind;
}

}// namespace

SweepResult run_sweep(const SweepConfig &config, const std::vector<ParsedMatrix> &matrices)
{
    struct Item
    {
        std::size_t matrix, method, fraction;
        int         trial;
    };
    std::vector<Method> methods;
    for (const auto &m : config.methods)
        methods.push_back(parse_method(m));

    std::vector<Item> items;
    for (std::size_t a = 0; a < matrices.size(); ++a)
        for (std::size_t b = 0; b < methods.size(); ++b)
            for (std::size_t c = 0; c < config.fractions.size(); ++c)
                for (int t = 0; t < config.trials; ++t)
                    items.push_back({a, b, c, t});

    struct Slot
    {
        MethodRun   run;
        double      seconds = 0.0;
        std::string failure;
    };
    std::vector<Slot> slots(items.size());
    std::mutex        log_mutex;

    parallel_for(items.size(), config.threads, [&](std::size_t k) {
        const auto   &it = items[k];
        const auto   &A  = matrices[it.matrix].matrix;
        StorageBudget budget{config.fractions[it.fraction], config.accounting};
        const auto    seed = config.seed + static_cast<std::uint64_t>(it.trial);

        index_t hybrid_rank = config.hybrid_rank;
        if (methods[it.method] == Method::hybrid && hybrid_rank == 0)
        {
            try
            {
                hybrid_rank = std::min<index_t>(A.size(), 2 * solve_core_size(A, Method::cur, budget).d);
            }
            catch (const budget_error &)
            {
                hybrid_rank = 1;
            }
        }

        const auto start = std::chrono::steady_clock::now();
        try
        {
            slots[k].run = run_method(A, methods[it.method], budget, seed, hybrid_rank);
        }
        catch (const std::exception &e)
        {
            slots[k].failure = e.what();
            std::lock_guard lock(log_mutex);
            std::cerr << "warning: " << matrices[it.matrix].meta.group << "/" << matrices[it.matrix].meta.name << " "
                      << config.methods[it.method] << ": " << e.what() << "\n";
        }
        slots[k].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    SweepResult out;
    std::set<std::size_t> failed_matrices;
    for (std::size_t k = 0; k < items.size(); ++k)
        if (!slots[k].failure.empty() && failed_matrices.insert(items[k].matrix).second)
        {
            const auto &meta = matrices[items[k].matrix].meta;
            out.failures.push_back({meta.group + "/" + meta.name, slots[k].failure});
        }

    std::ostringstream csv;
    csv << "group,name,kind,n,nnz,method,fraction,trial,seed,feasible,core,storage,budget,error\n";
    for (std::size_t k = 0; k < items.size(); ++k)
    {
        const auto &it   = items[k];
        const auto &meta = matrices[it.matrix].meta;
        if (failed_matrices.count(it.matrix))
            continue;
        const auto &run = slots[k].run;
        csv << csv_field(meta.group) << ',' << csv_field(meta.name) << ',' << csv_field(kind_of(meta)) << ',' << meta.n
            << ',' << meta.nnz << ',' << config.methods[it.method] << ',' << fmt("%g", config.fractions[it.fraction])
            << ',' << it.trial << ',' << config.seed + static_cast<std::uint64_t>(it.trial) << ','
            << (run.feasible ? 1 : 0) << ',' << run.d << ',' << run.storage << ',' << run.budget << ','
            << (run.feasible ? fmt("%.17g", run.error) : "") << '\n';
    }
    out.per_run_csv = csv.str();

    // items are grouped by (matrix, method, fraction) with trials innermost
    for (std::size_t k = 0; k < items.size(); k += static_cast<std::size_t>(config.trials))
    {
        const auto &it = items[k];
        if (failed_matrices.count(it.matrix))
            continue;
        CompressionReport rep;
        rep.matrix   = matrices[it.matrix].meta;
        rep.method   = config.methods[it.method];
        rep.fraction = config.fractions[it.fraction];
        rep.trials   = config.trials;
        rep.feasible = true;
        for (int t = 0; t < config.trials; ++t)
        {
            const auto &s = slots[k + static_cast<std::size_t>(t)];
            rep.wall_time_s += s.seconds;
            if (!s.run.feasible)
                rep.feasible = false;
            else
                rep.errors.push_back(s.run.error);
        }
        if (rep.feasible)
        {
            double sum = 0.0;
            for (double e : rep.errors)
                sum += e;
            rep.mean_error = sum / static_cast<double>(rep.errors.size());
            double ss      = 0.0;
            for (double e : rep.errors)
                ss += (e - rep.mean_error) * (e - rep.mean_error);
            rep.std_error = rep.errors.size() > 1 ? std::sqrt(ss / static_cast<double>(rep.errors.size() - 1)) : 0.0;
        }
        else
            rep.errors.clear();
        out.reports.push_back(std::move(rep));
    }
    out.win_table = win_rate_table(out.reports, config.baseline);
    return out;
}

SweepResult run_sweep(const SweepConfig &config)
{
    FetchOptions fo;
    fo.cache_dir = config.cache_dir;
    fo.base_url  = config.base_url;

    std::vector<ParsedMatrix> matrices;
    std::vector<SweepFailure> failures;
    for (const auto &ref : read_manifest(config.manifest))
    {
        try
        {
            matrices.push_back(fetch_suitesparse(ref, fo));
        }
        catch (const std::exception &e)
        {
            std::cerr << "warning: skipping " << ref.id() << ": " << e.what() << "\n";
            failures.push_back({ref.id(), e.what()});
        }
    }
    auto result = run_sweep(config, matrices);
    result.failures.insert(result.failures.begin(), failures.begin(), failures.end());
    return result;
}

std::vector<WinRow> win_rate_table(const std::vector<CompressionReport> &reports, const std::string &baseline)
{
    using Key = std::tuple<std::string, std::string, double>;   // matrix id, method, fraction
    std::map<Key, const CompressionReport *> index;
    std::set<std::string>                    methods;
    std::set<double>                         fractions;
    std::set<std::string>                    kinds;
    std::map<std::string, std::string>       kind_of_matrix;
    for (const auto &r : reports)
    {
        const auto id = r.matrix.group + "/" + r.matrix.name;
        index[{id, r.method, r.fraction}] = &r;
        if (r.method != baseline)
            methods.insert(r.method);
        fractions.insert(r.fraction);
        kinds.insert(kind_of(r.matrix));
        kind_of_matrix[id] = kind_of(r.matrix);
    }

    // +1 win, -1 loss, 0 tie
    auto outcome = [](const CompressionReport &m, const CompressionReport &b) {
        if (!m.feasible && !b.feasible)
            return 0;
        if (!m.feasible)
            return -1;
        if (!b.feasible)
            return 1;
        const double scale = std::max(std::abs(m.mean_error), std::abs(b.mean_error));
        if (std::abs(m.mean_error - b.mean_error) <= kTieTolerance * scale)
            return 0;
        return m.mean_error < b.mean_error ? 1 : -1;
    };

    std::vector<WinRow> rows;
    auto                add_row = [&](const std::string &label, const std::string &method, double fraction,
                       const std::function<bool(const std::string &)> &select) {
        WinRow row{label, method, fraction};
        int    w = 0, l = 0, t = 0;
        for (const auto &[id, kind] : kind_of_matrix)
        {
            if (!select(kind))
                continue;
            auto pm = index.find({id, method, fraction});
            auto pb = index.find({id, baseline, fraction});
            if (pm == index.end() || pb == index.end())
                continue;
            const int o = outcome(*pm->second, *pb->second);
            (o > 0 ? w : o < 0 ? l : t)++;
        }
        row.matrices = w + l + t;
        if (row.matrices > 0)
        {
            row.win_pct  = 100.0 * w / row.matrices;
            row.loss_pct = 100.0 * l / row.matrices;
            row.tie_pct  = 100.0 * t / row.matrices;
        }
        rows.push_back(row);
    };

    for (const auto &method : methods)
        for (double f : fractions)
        {
            for (const auto &kind : kinds)
                add_row(kind, method, f, [&](const std::string &k) { return k == kind; });
            add_row("total wins", method, f, [](const std::string &) { return true; });
        }
    return rows;
}

std::string win_table_csv(const std::vector<WinRow> &rows)
{
    std::ostringstream os;
    os << "kind,method,fraction,matrices,win_pct,loss_pct,tie_pct\n";
    for (const auto &r : rows)
        os << csv_field(r.kind) << ',' << r.method << ',' << fmt("%g", r.fraction) << ',' << r.matrices << ','
           << fmt("%.1f", r.win_pct) << ',' << fmt("%.1f", r.loss_pct) << ',' << fmt("%.1f", r.tie_pct) << '\n';
    return os.str();
}

std::string win_table_text(const std::vector<WinRow> &rows)
{
    // one table per method: kinds down, fractions across, cells are win percentages
    std::ostringstream                 os;
    std::vector<std::string>           methods;
    std::vector<double>                fractions;
    std::vector<std::string>           kinds;
    std::map<std::tuple<std::string, std::string, double>, double> cell;
    for (const auto &r : rows)
    {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
        if (std::find(fractions.begin(), fractions.end(), r.fraction) == fractions.end())
            fractions.push_back(r.fraction);
        if (std::find(kinds.begin(), kinds.end(), r.kind) == kinds.end())
            kinds.push_back(r.kind);
        cell[{r.method, r.kind, r.fraction}] = r.win_pct;
    }
    std::size_t width = 10;
    for (const auto &k : kinds)
        width = std::max(width, k.size());

    for (const auto &m : methods)
    {
        os << m << " wins (%)\n";
        os << std::string(width, ' ');
        for (double f : fractions)
            os << fmt("%8.0f%%", 100.0 * f);
        os << '\n';
        for (const auto &k : kinds)
        {
            os << k << std::string(width - k.size(), ' ');
            for (double f : fractions)
            {
                auto it = cell.find({m, k, f});
                os << (it == cell.end() ? std::string(9, ' ') : fmt("%9.1f", it->second));
            }
            os << '\n';
        }
        os << '\n';
    }
    return os.str();
}

std::string reports_json(const std::vector<CompressionReport> &reports, const std::vector<SweepFailure> &failures,
                         bool timing)
{
    using nlohmann::ordered_json;
    ordered_json root;
    root["reports"] = ordered_json::array();
    for (const auto &r : reports)
    {
        ordered_json j;
        j["matrix"] = {{"group", r.matrix.group},
                       {"name", r.matrix.name},
                       {"kind", r.matrix.kind},
                       {"n", r.matrix.n},
                       {"nnz", r.matrix.nnz},
                       {"numerical_symmetry", r.matrix.numerical_symmetry}};
        j["method"]   = r.method;
        j["fraction"] = r.fraction;
        j["trials"]   = r.trials;
        j["feasible"] = r.feasible;
        if (r.feasible)
        {
            j["mean_error"] = r.mean_error;
            j["std_error"]  = r.std_error;
        }
        else
        {
            j["mean_error"] = nullptr;
            j["std_error"]  = nullptr;
        }
        j["errors"] = r.errors;
        if (timing)
            j["wall_time_s"] = r.wall_time_s;
        root["reports"].push_back(std::move(j));
    }
    root["failures"] = ordered_json::array();
    for (const auto &f : failures)
        root["failures"].push_back({{"matrix", f.matrix}, {"message", f.message}});
    return root.dump(2) + "\n";
}

void write_sweep_outputs(const SweepConfig &config, const SweepResult &result)
{
    auto write = [](const std::filesystem::path &p, const std::string &text) {
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << text;
        if (!out)
            throw std::runtime_error("cannot write " + p.string());
    };
    const auto base = config.output.string();
    write(base + ".csv", result.per_run_csv);
    write(base + ".json", reports_json(result.reports, result.failures, config.timing));
    write(base + "_winrate.csv", win_table_csv(result.win_table));
}

//
// decay and rank sweeps
//

std::vector<DecayPoint> run_decay_sweep(index_t n, const std::vector<double> &t_list, std::uint64_t seed, index_t core_size)
{
    std::vector<DecayPoint> out;
    for (double t : t_list)
    {
        const auto A = gen_decay_matrix({n, t, seed});
        FactorOptions opts;
        opts.seed    = seed;
        const auto F = factor_symmetric(A, core_size, opts);
        out.push_back({t, frobenius_relative_error(A, reconstruct_sym(F))});
    }
    return out;
}

std::string decay_csv(const std::vector<DecayPoint> &points)
{
    std::ostringstream os;
    os << "t,error\n";
    for (const auto &p : points)
        os << fmt("%g", p.t) << ',' << fmt("%.17g", p.error) << '\n';
    return os.str();
}

RankSweep run_rank_sweep(const SquareMatrix &A, const std::vector<index_t> &r_list, const StorageBudget &budget,
                         std::uint64_t seed, int trials)
{
    if (trials < 1)
        throw std::invalid_argument("trials must be at least 1");
    RankSweep out;
    auto      mean = [&](auto &&fn) {
        double s = 0.0;
        for (int t = 0; t < trials; ++t)
            s += fn(seed + static_cast<std::uint64_t>(t));
        return s / trials;
    };
    auto checked = [](const MethodRun &run) {
        if (!run.feasible)
            throw budget_error(to_string(run.method) + " does not fit the budget");
        return run;
    };

    out.cur_rank  = solve_core_size(A, Method::cur, budget).d;
    out.core_size = solve_core_size(A, Method::hybrid, budget).d;
    out.cur_only  = mean([&](std::uint64_t s) { return checked(run_method(A, Method::cur, budget, s)).error; });
    out.mmf_only  = mean([&](std::uint64_t s) { return checked(run_method(A, Method::direct_greedy_top_n, budget, s)).error; });
    for (auto r : r_list)
        out.hybrid.emplace_back(r, mean([&](std::uint64_t s) { return checked(run_method(A, Method::hybrid, budget, s, r)).error; }));
    return out;
}

std::string rank_sweep_csv(const RankSweep &sweep)
{
    std::ostringstream os;
    os << "series,r,core,error\n";
    for (const auto &[r, e] : sweep.hybrid)
        os << "hybrid," << r << ',' << sweep.core_size << ',' << fmt("%.17g", e) << '\n';
    os << "cur_only," << sweep.cur_rank << ",," << fmt("%.17g", sweep.cur_only) << '\n';
    os << "mmf_only,," << sweep.core_size << ',' << fmt("%.17g", sweep.mmf_only) << '\n';
    return os.str();
}

}// namespace mmf
