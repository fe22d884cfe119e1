#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "amc/engine.hpp"

namespace amc {

// One (file, seed) row of a batch experiment.
struct BenchmarkRecord {
    std::string path;
    std::optional<std::uint32_t> n;
    std::optional<std::size_t> clauses;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> exact_count;
    std::optional<BigCount> approx_count;
    std::optional<std::pair<double, double>> interval;
    std::optional<bool> within_tolerance; // set only when both counts are present
    std::uint32_t t = 0;
    std::size_t non_bot = 0;
    std::uint64_t sat_calls = 0;
    double wall_time_ms = 0;
    std::string error; // non-empty when the file could not be processed
};

struct BatchConfig {
    ApproxParams params; // params.seed is replaced by each entry of `seeds`
    std::vector<std::uint64_t> seeds{1};
    std::uint32_t oracle_limit = 22;
    unsigned threads = 1;
};

// approx / exact within a factor of (1 + epsilon) either way, exactly.
bool within_tolerance(const BigCount& approx, std::uint64_t exact, double epsilon);

// sum |A_i - C_i| / sum C_i over rows carrying both counts; nullopt when no
// row qualifies or the exact counts sum to zero.
std::optional<double> l1_relative_error(const std::vector<BenchmarkRecord>& rows);

// DIMACS files (*.cnf, *.dimacs) directly inside `dir`, sorted by path.
std::vector<std::filesystem::path> list_benchmarks(const std::filesystem::path& dir);

// Runs every (file, seed) pair; rows come back sorted by (file, seed)
// regardless of scheduling. Failures become rows with `error` set.
std::vector<BenchmarkRecord> run_batch(const std::vector<std::filesystem::path>& files, const BatchConfig& cfg);

extern const char* const csv_header;
std::string records_to_csv(const std::vector<BenchmarkRecord>& rows);
nlohmann::json aggregate_json(const std::vector<BenchmarkRecord>& rows, const BatchConfig& cfg);

} // namespace amc
