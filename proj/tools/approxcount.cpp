// approxcount: approximate and exact model counting for DIMACS CNF.
//
// Exit codes: 0 success, 1 I/O or parse error, 2 every core trial failed,
// 3 exact oracle out of range. `solve` follows the SAT-competition
// convention (10 sat, 20 unsat).

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "amc/bounded_sat.hpp"
#include "amc/cnf.hpp"
#include "amc/engine.hpp"
#include "amc/exact_counter.hpp"
#include "amc/harness.hpp"
#include "amc/report.hpp"

namespace {

constexpr int exit_io = 1;
constexpr int exit_all_bot = 2;
constexpr int exit_oracle_range = 3;

struct EngineFlags {
    double epsilon = 0.75;
    double delta = 0.1;
    std::string iters_mode = "optimized";
    std::string leapfrog = "on";
    unsigned leapfrog_warmup = 2;
    long long per_call_timeout_ms = 0;
    unsigned timeout_retry_cap = 10;
    unsigned chunk_width = amc::default_chunk_width;
    unsigned threads = 1;
    std::string external_solver;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--epsilon", epsilon, "Tolerance, 0 < eps <= 1")->capture_default_str();
        cmd.add_option("--delta", delta, "Failure probability, 0 < delta <= 1")->capture_default_str();
        cmd.add_option("--iters-mode", iters_mode, "Trial count rule")
            ->check(CLI::IsMember({"formula", "optimized"}))
            ->capture_default_str();
        cmd.add_option("--leapfrog", leapfrog, "Start later trials at the smallest width seen early")
            ->check(CLI::IsMember({"on", "off"}))
            ->capture_default_str();
        cmd.add_option("--leapfrog-warmup", leapfrog_warmup, "Trials that search from width 1")
            ->capture_default_str();
        cmd.add_option("--per-call-timeout-ms", per_call_timeout_ms, "Budget per bounded enumeration (0: none)")
            ->capture_default_str();
        cmd.add_option("--timeout-retry-cap", timeout_retry_cap, "Retries of a timed-out width before failing")
            ->capture_default_str();
        cmd.add_option("--chunk-width", chunk_width, "Inputs per chunk in the XOR encoding")->capture_default_str();
        cmd.add_option("--threads", threads, "Worker threads")->capture_default_str();
        cmd.add_option("--external-solver", external_solver,
                       "Solver command reading DIMACS on stdin, printing s/v lines");
    }

    amc::ApproxParams params(std::uint64_t seed) const
    {
        amc::ApproxParams p;
        p.epsilon = epsilon;
        p.delta = delta;
        p.seed = seed;
        p.iter_count_mode = iters_mode == "formula" ? amc::IterCountMode::formula : amc::IterCountMode::optimized;
        p.leapfrog = leapfrog == "on";
        p.leapfrog_warmup = leapfrog_warmup;
        if (per_call_timeout_ms > 0) p.per_call_budget = std::chrono::milliseconds(per_call_timeout_ms);
        p.timeout_retry_cap = timeout_retry_cap;
        p.chunk_width = chunk_width;
        p.threads = threads;
        p.external_solver = external_solver;
        return p;
    }
};

void print_summary(const amc::RunReport& r)
{
    std::cerr << "c n=" << r.num_vars << " clauses=" << r.num_clauses << " pivot=" << r.pivot << " t=" << r.t
              << " non_bot=" << r.non_bot << " sat_calls=" << r.sat_calls << '\n';
    if (r.final_count) {
        std::cerr << "c count " << r.final_count->str() << " interval [" << r.interval->first << ", "
                  << r.interval->second << "] in " << r.wall_time_ms << " ms\n";
    } else {
        std::cerr << "c all " << r.t << " trials failed\n";
    }
}

int cmd_count(const std::string& path, const EngineFlags& flags, std::uint64_t seed, bool json_only, bool trace,
              bool wall_time)
{
    std::optional<amc::CnfFormula> f;
    try {
        f = amc::parse_dimacs_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    const amc::RunReport report = amc::approx_mc(*f, flags.params(seed));
    std::cout << amc::report_to_json(report, {trace, wall_time}).dump(2) << '\n';
    if (!json_only) print_summary(report);
    return report.final_count ? 0 : exit_all_bot;
}

int cmd_exact(const std::string& path, std::uint32_t limit)
{
    std::optional<amc::CnfFormula> f;
    try {
        f = amc::parse_dimacs_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    try {
        std::cout << amc::exact_count(*f, limit) << '\n';
    } catch (const amc::OracleRangeError& e) {
        std::cerr << e.what() << '\n';
        return exit_oracle_range;
    }
    return 0;
}

int cmd_batch(const std::string& dir, const EngineFlags& flags, const std::vector<std::uint64_t>& seeds,
              const std::string& out_csv, std::uint32_t oracle_limit)
{
    std::vector<std::filesystem::path> files;
    try {
        files = amc::list_benchmarks(dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    amc::BatchConfig cfg;
    cfg.params = flags.params(0);
    cfg.seeds = seeds;
    cfg.oracle_limit = oracle_limit;
    cfg.threads = flags.threads;
    const auto rows = amc::run_batch(files, cfg);
    std::ofstream out(out_csv);
    if (!out) {
        std::cerr << "error: cannot write '" << out_csv << "'\n";
        return exit_io;
    }
    out << amc::records_to_csv(rows);
    std::cout << amc::aggregate_json(rows, cfg).dump(2) << '\n';
    return 0;
}

int cmd_solve(const std::string& path)
{
    std::optional<amc::CnfFormula> f;
    try {
        if (path == "-") {
            f = amc::parse_dimacs(std::cin);
        } else {
            f = amc::parse_dimacs_file(path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    const auto model = amc::solve_once(f->clauses(), f->num_vars());
    if (!model) {
        std::cout << "s UNSATISFIABLE\n";
        return 20;
    }
    std::cout << "s SATISFIABLE\n";
    std::ostringstream line;
    line << 'v';
    for (std::uint32_t v = 0; v < f->num_vars(); ++v) {
        line << ' ' << (model->get(v) ? "" : "-") << v + 1;
        if (line.tellp() > 70) {
            std::cout << line.str() << '\n';
            line.str("v");
            line.seekp(0, std::ios_base::end);
        }
    }
    std::cout << line.str() << " 0\n";
    return 10;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Approximate model counting with random XOR hashing"};
    app.require_subcommand(1);

    EngineFlags count_flags;
    std::string count_path;
    std::uint64_t count_seed = 1;
    bool json_only = false;
    bool trace = false;
    bool no_wall_time = false;
    auto* count = app.add_subcommand("count", "Approximate model count (JSON report on stdout)");
    count->add_option("file", count_path, "DIMACS CNF file")->required();
    count_flags.add_to(*count);
    count->add_option("--seed", count_seed, "Master seed")->capture_default_str();
    count->add_flag("--json", json_only, "JSON report only, no summary on stderr");
    count->add_flag("--trace", trace, "Include per-iteration records");
    count->add_flag("--no-wall-time", no_wall_time, "Omit wall_time_ms from the report");

    std::string exact_path;
    std::uint32_t exact_limit = amc::default_oracle_limit;
    auto* exact = app.add_subcommand("exact", "Exact model count by exhaustive enumeration");
    exact->add_option("file", exact_path, "DIMACS CNF file")->required();
    exact->add_option("--limit", exact_limit, "Refuse formulas with more variables")->capture_default_str();

    EngineFlags batch_flags;
    std::string batch_dir;
    std::string batch_out = "batch.csv";
    std::vector<std::uint64_t> batch_seeds{1};
    std::uint32_t oracle_limit = 22;
    auto* batch = app.add_subcommand("batch", "Run every DIMACS file in a directory against the exact oracle");
    batch->add_option("dir", batch_dir, "Directory of .cnf files")->required();
    batch_flags.add_to(*batch);
    batch->add_option("--seeds", batch_seeds, "Comma-separated master seeds")->delimiter(',');
    batch->add_option("--out", batch_out, "CSV output path")->capture_default_str();
    batch->add_option("--oracle-limit", oracle_limit, "Exact counts only up to this many variables")
        ->capture_default_str();

    std::string solve_path = "-";
    auto* solve = app.add_subcommand("solve", "Decide satisfiability; SAT-competition output");
    solve->add_option("file", solve_path, "DIMACS CNF file, '-' for stdin")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*count) return cmd_count(count_path, count_flags, count_seed, json_only, trace, !no_wall_time);
        if (*exact) return cmd_exact(exact_path, exact_limit);
        if (*batch) return cmd_batch(batch_dir, batch_flags, batch_seeds, batch_out, oracle_limit);
        if (*solve) return cmd_solve(solve_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
    return 0;
}
