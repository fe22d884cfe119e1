#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amc/cnf.hpp"
#include "amc/solver.hpp"

namespace amc {

// Models of formula AND constraint_clauses, projected onto z_1..z_n where
// n = formula.num_vars(). Constraint clauses may mention auxiliary variables
// above n; those are never blocked on.
struct BoundedQuery {
    const CnfFormula& formula;
    std::span<const Clause> constraint_clauses;
    std::size_t bound = 1;
    std::optional<std::chrono::milliseconds> time_budget;
};

struct EnumerationResult {
    enum class Outcome { complete, timed_out };

    Outcome outcome = Outcome::complete;
    std::vector<Model> models; // distinct over z_1..z_n, in discovery order
    std::uint64_t sat_calls = 0;

    bool complete() const { return outcome == Outcome::complete; }
    bool timed_out() const { return outcome == Outcome::timed_out; }
    // Models found before the budget ran out; informational only.
    std::size_t partial_count() const { return models.size(); }
};

// Returns min(bound, #models) distinct projected models, or timed_out.
EnumerationResult bounded_sat(const BoundedQuery& q);

// One satisfiability check with the internal solver. Returns a full
// assignment to variables 1..n_total, or nullopt when unsatisfiable.
std::optional<BitVec> solve_once(std::span<const Clause> clauses, std::uint32_t n_total,
                                 std::span<const Literal> assumptions = {});

// Adapter for a SAT-competition style solver binary: the clause set goes to
// the child's stdin as DIMACS, "s ..." and "v ..." lines are read back from
// its stdout. Each solve() spawns a fresh process.
class ExternalSolver {
public:
    explicit ExternalSolver(std::string command) : command_(std::move(command)) {}

    void ensure_vars(std::uint32_t n) { num_vars_ = std::max(num_vars_, n); }
    bool add_clause(std::span<const Literal> lits);
    sat::Status solve(std::span<const Literal> assumptions = {}, const sat::Limits& limits = {});
    BitVec model_prefix(std::uint32_t n) const;

    std::uint64_t spawns() const { return spawns_; }

private:
    std::string command_;
    std::uint32_t num_vars_ = 0;
    std::vector<Clause> clauses_;
    std::vector<bool> model_;
    std::uint64_t spawns_ = 0;
};

EnumerationResult bounded_sat_external(const BoundedQuery& q, const std::string& command);

// Parses SAT-competition solver output. Returns sat with `model` filled
// (index v-1 for variable v), unsat, or unknown when no status line is found.
sat::Status parse_competition_output(const std::string& text, std::uint32_t num_vars, std::vector<bool>& model);

} // namespace amc
