#include "amc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "amc/cnf.hpp"
#include "amc/exact_counter.hpp"
#include "amc/report.hpp"

namespace amc {

namespace fs = std::filesystem;
using nlohmann::json;

const char* const csv_header = "file,n,clauses,seed,exact,approx,lo,hi,within,t,non_bot,sat_calls,ms";

bool within_tolerance(const BigCount& approx, std::uint64_t exact, double epsilon)
{
    const Rational factor = 1 + exact_rational(epsilon);
    const Rational a{approx};
    const Rational c{BigCount(exact)};
    return a * factor >= c && a <= c * factor;
}

std::optional<double> l1_relative_error(const std::vector<BenchmarkRecord>& rows)
{
    BigCount diff = 0;
    BigCount total = 0;
    bool any = false;
    for (const BenchmarkRecord& r : rows) {
        if (!r.exact_count || !r.approx_count) continue;
        any = true;
        const BigCount c(*r.exact_count);
        diff += boost::multiprecision::abs(*r.approx_count - c);
        total += c;
    }
    if (!any || total == 0) return std::nullopt;
    return Rational(diff, total).convert_to<double>();
}

std::vector<fs::path> list_benchmarks(const fs::path& dir)
{
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext == ".cnf" || ext == ".dimacs") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<BenchmarkRecord> run_batch(const std::vector<fs::path>& input, const BatchConfig& cfg)
{
    std::vector<fs::path> files = input;
    std::sort(files.begin(), files.end());
    std::vector<std::uint64_t> seeds = cfg.seeds;
    std::sort(seeds.begin(), seeds.end());

    // Parse and exactly count each file once.
    struct Prepared {
        std::optional<CnfFormula> formula;
        std::optional<std::uint64_t> exact;
        std::string error;
    };
    std::vector<Prepared> prepared(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        try {
            prepared[i].formula = parse_dimacs_file(files[i].string());
            if (prepared[i].formula->num_vars() <= cfg.oracle_limit) {
                prepared[i].exact = exact_count(*prepared[i].formula, cfg.oracle_limit);
            }
        } catch (const std::exception& e) {
            prepared[i].error = e.what();
        }
    }

    std::vector<BenchmarkRecord> rows(files.size() * seeds.size());
    auto run_job = [&](std::size_t job) {
        const std::size_t fi = job / seeds.size();
        const Prepared& p = prepared[fi];
        BenchmarkRecord& rec = rows[job];
        rec.path = files[fi].string();
        rec.seed = seeds[job % seeds.size()];
        rec.exact_count = p.exact;
        if (!p.formula) {
            rec.error = p.error;
            return;
        }
        rec.n = p.formula->num_vars();
        rec.clauses = p.formula->num_clauses();
        ApproxParams params = cfg.params;
        params.seed = rec.seed;
        params.threads = 1;
        try {
            const RunReport report = approx_mc(*p.formula, params);
            rec.approx_count = report.final_count;
            rec.interval = report.interval;
            rec.t = report.t;
            rec.non_bot = report.non_bot;
            rec.sat_calls = report.sat_calls;
            rec.wall_time_ms = report.wall_time_ms;
            if (rec.exact_count && rec.approx_count) {
                rec.within_tolerance = within_tolerance(*rec.approx_count, *rec.exact_count, params.epsilon);
            }
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, cfg.threads), rows.size()));
    if (workers <= 1) {
        for (std::size_t job = 0; job < rows.size(); ++job) run_job(job);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t job = cursor++; job < rows.size(); job = cursor++) run_job(job);
            });
        }
    }
    return rows;
}

namespace {

std::string fmt_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string{};
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string records_to_csv(const std::vector<BenchmarkRecord>& rows)
{
    std::string out = csv_header;
    out += '\n';
    for (const BenchmarkRecord& r : rows) {
        out += csv_field(r.path) + ',';
        out += (r.n ? std::to_string(*r.n) : "") + ',';
        out += (r.clauses ? std::to_string(*r.clauses) : "") + ',';
        out += std::to_string(r.seed) + ',';
        out += (r.exact_count ? std::to_string(*r.exact_count) : "") + ',';
        out += (r.approx_count ? r.approx_count->str() : "") + ',';
        out += (r.interval ? fmt_double(r.interval->first) : "") + ',';
        out += (r.interval ? fmt_double(r.interval->second) : "") + ',';
        out += (r.within_tolerance ? (*r.within_tolerance ? "1" : "0") : "") + std::string(",");
        out += std::to_string(r.t) + ',';
        out += std::to_string(r.non_bot) + ',';
        out += std::to_string(r.sat_calls) + ',';
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", r.wall_time_ms);
        out += ms;
        out += '\n';
    }
    return out;
}

json aggregate_json(const std::vector<BenchmarkRecord>& rows, const BatchConfig& cfg)
{
    std::size_t judged = 0;
    std::size_t within = 0;
    std::size_t all_bot = 0;
    json failures = json::array();
    for (const BenchmarkRecord& r : rows) {
        if (!r.error.empty()) {
            failures.push_back({{"file", r.path}, {"seed", r.seed}, {"error", r.error}});
            continue;
        }
        if (!r.approx_count) ++all_bot;
        if (r.within_tolerance) {
            ++judged;
            if (*r.within_tolerance) ++within;
        }
    }
    const auto l1 = l1_relative_error(rows);
    json j;
    j["rows"] = rows.size();
    j["judged"] = judged;
    j["within"] = within;
    j["within_frequency"] = judged ? json(static_cast<double>(within) / static_cast<double>(judged)) : json(nullptr);
    j["l1_relative_error"] = l1 ? json(*l1) : json(nullptr);
    j["all_bot_runs"] = all_bot;
    j["failures"] = std::move(failures);
    j["epsilon"] = cfg.params.epsilon;
    j["delta"] = cfg.params.delta;
    j["iter_count_mode"] = to_string(cfg.params.iter_count_mode);
    j["leapfrog"] = cfg.params.leapfrog;
    j["seeds"] = cfg.seeds;
    j["oracle_limit"] = cfg.oracle_limit;
    return j;
}

} // namespace amc
