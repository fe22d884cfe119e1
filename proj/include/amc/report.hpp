#pragma once

#include <string>

#include "json.hpp"

#include "amc/engine.hpp"

namespace amc {

struct ReportOptions {
    bool trace = false;         // per-iteration (i, |S|, sat_calls) records
    bool wall_time = true;
};

// Counts that fit 64 bits are JSON integers; larger ones are decimal strings.
nlohmann::json count_to_json(const BigCount& c);

nlohmann::json core_to_json(const CoreResult& r, std::size_t index, bool trace);
nlohmann::json report_to_json(const RunReport& r, const ReportOptions& opts = {});

const char* to_string(IterCountMode mode);

} // namespace amc
