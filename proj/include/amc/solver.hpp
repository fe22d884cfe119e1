#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "amc/bitvec.hpp"
#include "amc/cnf.hpp"

namespace amc::sat {

enum class Status { sat, unsat, unknown };

using Clock = std::chrono::steady_clock;

struct Limits {
    std::optional<Clock::time_point> deadline;
    std::uint64_t max_conflicts = 0; // 0: unlimited
};

struct Stats {
    std::uint64_t solves = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t restarts = 0;
    std::uint64_t reductions = 0;
};

// Incremental CDCL solver: two-watched-literal propagation, first-UIP
// learning with local minimization, VSIDS, phase saving, Luby restarts.
// Clauses may be added between solve() calls. No randomness: results are a
// function of the input and clause order.
class Solver {
public:
    explicit Solver(std::uint32_t num_vars = 0);

    std::uint32_t num_vars() const { return num_vars_; }
    // Grows the variable range to at least n.
    void ensure_vars(std::uint32_t n);

    // Returns false once the clause set is known unsatisfiable at level 0.
    bool add_clause(std::span<const Literal> lits);
    bool add_clause(std::initializer_list<Literal> lits)
    {
        return add_clause(std::span<const Literal>(lits.begin(), lits.size()));
    }

    Status solve(std::span<const Literal> assumptions = {}, const Limits& limits = {});

    // Valid after solve() returned sat.
    bool model_value(Var v) const { return model_[v.index - 1] != 0; }
    BitVec model_prefix(std::uint32_t n) const;

    bool okay() const { return ok_; }
    const Stats& stats() const { return stats_; }

private:
    using Lit = std::uint32_t; // 2 * var0 + sign
    using CRef = std::uint32_t;
    static constexpr CRef no_reason = UINT32_MAX;
    static constexpr std::uint8_t l_false = 0, l_true = 1, l_undef = 2;

    struct Watcher {
        CRef cref;
        Lit blocker;
    };

    static Lit to_lit(const Literal& l) { return 2 * (l.var.index - 1) + (l.negated ? 1u : 0u); }
    static std::uint32_t var_of(Lit l) { return l >> 1; }
    static bool sign_of(Lit l) { return l & 1u; }

    std::uint8_t value(Lit l) const
    {
        const std::uint8_t a = assigns_[var_of(l)];
        return a == l_undef ? l_undef : static_cast<std::uint8_t>(a ^ sign_of(l));
    }

    // Clause arena: [size << 2 | deleted << 1 | learnt][activity bits][lits...]
    std::uint32_t clause_size(CRef c) const { return arena_[c] >> 2; }
    bool clause_learnt(CRef c) const { return arena_[c] & 1u; }
    bool clause_deleted(CRef c) const { return arena_[c] & 2u; }
    void mark_deleted(CRef c) { arena_[c] |= 2u; }
    Lit* clause_lits(CRef c) { return &arena_[c + 2]; }
    const Lit* clause_lits(CRef c) const { return &arena_[c + 2]; }
    float clause_activity(CRef c) const { return std::bit_cast<float>(arena_[c + 1]); }
    void set_clause_activity(CRef c, float a) { arena_[c + 1] = std::bit_cast<std::uint32_t>(a); }

    CRef alloc_clause(std::span<const Lit> lits, bool learnt);
    void attach(CRef c);
    std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }
    void enqueue(Lit p, CRef reason);
    CRef propagate();
    void analyze(CRef confl, std::vector<Lit>& out, std::uint32_t& bt_level);
    void cancel_until(std::uint32_t level);
    Status search(std::uint64_t conflict_budget, std::span<const Literal> assumptions, const Limits& limits,
                  bool& budget_exhausted);
    bool out_of_budget(const Limits& limits, std::uint64_t start_conflicts) const;

    void bump_var(std::uint32_t v);
    void bump_clause(CRef c);
    void decay() { var_inc_ /= 0.95; cla_inc_ /= 0.999f; }

    // Order heap on activity.
    void heap_insert(std::uint32_t v);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    std::uint32_t heap_pop();
    bool heap_lt(std::uint32_t a, std::uint32_t b) const { return activity_[a] > activity_[b]; }

    // Level-0 garbage collection: drops satisfied and deleted clauses,
    // strips false literals and rebuilds watches.
    void collect_level0(bool reduce_learnts);

    std::uint32_t num_vars_ = 0;
    bool ok_ = true;

    std::vector<std::uint32_t> arena_;
    std::vector<CRef> clauses_;
    std::vector<CRef> learnts_;
    std::vector<std::vector<Watcher>> watches_; // watches_[p]: clauses watching ~p

    std::vector<std::uint8_t> assigns_;
    std::vector<std::uint8_t> phase_;
    std::vector<std::uint32_t> level_;
    std::vector<CRef> reason_;
    std::vector<Lit> trail_;
    std::vector<std::uint32_t> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    float cla_inc_ = 1.0f;
    std::vector<std::uint32_t> heap_;
    std::vector<std::int32_t> heap_pos_; // -1 when absent

    std::vector<std::uint8_t> seen_;
    std::vector<Lit> analyze_stack_;
    std::vector<std::uint8_t> model_;

    double max_learnts_ = 0;
    Stats stats_;
};

} // namespace amc::sat
