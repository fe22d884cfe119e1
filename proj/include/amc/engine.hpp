#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "amc/bounded_sat.hpp"
#include "amc/cnf.hpp"
#include "amc/random.hpp"
#include "amc/xor_hash.hpp"

namespace amc {

// Model counts can exceed 64 bits (|S| * 2^(i-l) with i up to n).
using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class IterCountMode { formula, optimized };

struct ApproxParams {
    double epsilon = 0.75;
    double delta = 0.1;
    std::uint64_t seed = 1;
    IterCountMode iter_count_mode = IterCountMode::optimized;
    bool leapfrog = true;
    unsigned leapfrog_warmup = 2; // invocations that search from the smallest width
    std::optional<std::chrono::milliseconds> per_call_budget;
    unsigned timeout_retry_cap = 10;
    unsigned chunk_width = default_chunk_width;
    std::string external_solver; // command line; empty selects the internal solver
    unsigned threads = 1;        // scheduling only; never changes the result

    void validate() const;
};

// ceil(3 e^{1/2} (1 + 1/epsilon)^2), 0 < epsilon <= 1.
std::uint32_t compute_threshold(double epsilon);
// Small-cell bound used by the core: twice the threshold.
std::uint32_t compute_pivot(double epsilon);

// ceil(35 log2(3/delta)), 0 < delta <= 1.
std::uint32_t compute_iter_count_formula(double delta);

// Probability of at least m heads in t tosses of a p-biased coin, exactly.
Rational eta(std::uint32_t t, std::uint32_t m, const Rational& p);

// Smallest t >= 1 with eta(t, ceil(t/2), 2/5) <= delta.
std::uint32_t compute_iter_count_optimized(double delta);

std::uint32_t compute_iter_count(double delta, IterCountMode mode);

// Exact rational value of a finite double.
Rational exact_rational(double x);

// Median of the values: lower-middle order statistic for even sizes,
// nullopt for an empty list.
std::optional<BigCount> find_median(std::vector<BigCount> values);

struct IterationTrace {
    std::uint32_t i = 0;
    std::uint32_t width = 0; // i - l, number of hash rows
    std::size_t cell_size = 0;
    std::uint64_t sat_calls = 0;
    bool timed_out = false;
};

struct CoreResult {
    enum class Outcome { count, bot };

    Outcome outcome = Outcome::bot;
    BigCount value = 0;         // cell_size * 2^cells_log2 when outcome == count
    std::size_t cell_size = 0;  // |S| of the last query
    std::uint32_t cells_log2 = 0;
    std::uint32_t final_i = 0;  // loop index at exit; 0 on the exact path
    bool exact_path = false;    // count obtained without hashing
    std::uint32_t start_width = 0;
    std::uint64_t sat_calls = 0;
    std::uint32_t timeout_retries = 0;
    std::vector<IterationTrace> iterations;

    bool is_count() const { return outcome == Outcome::count; }
};

using BoundedSatFn = std::function<EnumerationResult(const BoundedQuery&)>;

struct CoreConfig {
    std::uint32_t pivot = 0;
    std::optional<std::chrono::milliseconds> per_call_budget;
    unsigned timeout_retry_cap = 10;
    unsigned chunk_width = default_chunk_width;
    BoundedSatFn bounded = bounded_sat;
};

// l = floor(log2 pivot) - 1.
std::uint32_t base_level(std::uint32_t pivot);

// One hashing trial. The unhashed query runs first; if the formula has more
// than `pivot` models, hash widths are tried from `start_width` (default 1)
// upward until a non-empty cell of at most `pivot` models is found or the
// width reaches n - l. A timed-out query is repeated at the same width with a
// fresh hash, at most timeout_retry_cap times.
CoreResult approx_mc_core(const CnfFormula& f, const CoreConfig& cfg, RandomSource& rng,
                          std::optional<std::uint32_t> start_width = std::nullopt);

// Records the smallest terminating width among the first `warmup`
// invocations and hands it out as the starting width afterwards.
class Leapfrog {
public:
    Leapfrog(bool enabled, unsigned warmup) : enabled_(enabled), warmup_(warmup) {}

    bool enabled() const { return enabled_; }
    unsigned warmup() const { return warmup_; }
    bool in_warmup(std::size_t index) const { return enabled_ && index < warmup_; }

    void record(std::size_t index, const CoreResult& r);
    std::optional<std::uint32_t> start_width(std::size_t index) const;
    std::optional<std::uint32_t> recorded() const { return best_; }

private:
    bool enabled_;
    unsigned warmup_;
    std::optional<std::uint32_t> best_;
};

struct RunReport {
    std::optional<BigCount> final_count;
    std::optional<std::pair<double, double>> interval;
    std::uint32_t t = 0;
    std::uint32_t pivot = 0;
    std::size_t non_bot = 0;
    std::vector<CoreResult> core_traces;
    std::optional<std::uint32_t> leapfrog_width;
    std::uint64_t sat_calls = 0;
    std::uint64_t timeout_retries = 0;
    ApproxParams params;
    std::uint32_t num_vars = 0;
    std::size_t num_clauses = 0;
    double wall_time_ms = 0;
};

// Runs t core trials (t from delta), each with its own stream derived from
// params.seed and the trial index, and reports the median of the non-bot
// estimates with the interval [c/(1+eps), (1+eps)c].
RunReport approx_mc(const CnfFormula& f, const ApproxParams& params);

} // namespace amc
