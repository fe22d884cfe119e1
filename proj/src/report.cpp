#include "amc/report.hpp"

namespace amc {

using nlohmann::json;

const char* to_string(IterCountMode mode)
{
    return mode == IterCountMode::formula ? "formula" : "optimized";
}

json count_to_json(const BigCount& c)
{
    if (c >= 0 && c <= std::numeric_limits<std::uint64_t>::max()) return c.convert_to<std::uint64_t>();
    return c.str();
}

json core_to_json(const CoreResult& r, std::size_t index, bool trace)
{
    json j;
    j["index"] = index;
    j["outcome"] = r.is_count() ? "count" : "bot";
    j["value"] = r.is_count() ? count_to_json(r.value) : json(nullptr);
    j["cell_size"] = r.cell_size;
    j["cells_log2"] = r.cells_log2;
    j["final_i"] = r.final_i;
    j["exact_path"] = r.exact_path;
    j["start_width"] = r.start_width;
    j["sat_calls"] = r.sat_calls;
    j["timeout_retries"] = r.timeout_retries;
    if (trace) {
        json its = json::array();
        for (const IterationTrace& it : r.iterations) {
            its.push_back({{"i", it.i},
                           {"width", it.width},
                           {"cell_size", it.cell_size},
                           {"sat_calls", it.sat_calls},
                           {"timed_out", it.timed_out}});
        }
        j["iterations"] = std::move(its);
    }
    return j;
}

json report_to_json(const RunReport& r, const ReportOptions& opts)
{
    json j;
    j["final_count"] = r.final_count ? count_to_json(*r.final_count) : json(nullptr);
    j["interval"] = r.interval ? json::array({r.interval->first, r.interval->second}) : json(nullptr);
    j["t"] = r.t;
    j["pivot"] = r.pivot;
    j["non_bot"] = r.non_bot;
    j["sat_calls"] = r.sat_calls;
    j["timeout_retries"] = r.timeout_retries;
    j["leapfrog_width"] = r.leapfrog_width ? json(*r.leapfrog_width) : json(nullptr);
    j["seed"] = r.params.seed;
    j["formula"] = {{"num_vars", r.num_vars}, {"num_clauses", r.num_clauses}};

    const ApproxParams& p = r.params;
    j["params"] = {
        {"epsilon", p.epsilon},
        {"delta", p.delta},
        {"seed", p.seed},
        {"iter_count_mode", to_string(p.iter_count_mode)},
        {"leapfrog", p.leapfrog},
        {"leapfrog_warmup", p.leapfrog_warmup},
        {"per_call_timeout_ms", p.per_call_budget ? json(p.per_call_budget->count()) : json(nullptr)},
        {"timeout_retry_cap", p.timeout_retry_cap},
        {"chunk_width", p.chunk_width},
        {"external_solver", p.external_solver.empty() ? json(nullptr) : json(p.external_solver)},
    };

    json cores = json::array();
    for (std::size_t i = 0; i < r.core_traces.size(); ++i) cores.push_back(core_to_json(r.core_traces[i], i, opts.trace));
    j["core_traces"] = std::move(cores);
    if (opts.wall_time) j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

} // namespace amc
