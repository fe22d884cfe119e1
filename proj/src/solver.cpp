#include "amc/solver.hpp"

#include <algorithm>
#include <cmath>

namespace amc::sat {

namespace {

// Finite Luby sequence value for restart index x with base y.
double luby(double y, std::uint64_t x)
{
    std::uint64_t size = 1;
    int seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

constexpr std::uint32_t undef_lit = UINT32_MAX;
constexpr std::uint64_t restart_base = 100;

} // namespace

Solver::Solver(std::uint32_t num_vars) { ensure_vars(num_vars); }

void Solver::ensure_vars(std::uint32_t n)
{
    if (n <= num_vars_) return;
    const std::uint32_t old = num_vars_;
    num_vars_ = n;
    watches_.resize(2 * static_cast<std::size_t>(n));
    assigns_.resize(n, l_undef);
    phase_.resize(n, l_false);
    level_.resize(n, 0);
    reason_.resize(n, no_reason);
    activity_.resize(n, 0.0);
    heap_pos_.resize(n, -1);
    seen_.resize(n, 0);
    for (std::uint32_t v = old; v < n; ++v) heap_insert(v);
}

Solver::CRef Solver::alloc_clause(std::span<const Lit> lits, bool learnt)
{
    const CRef c = static_cast<CRef>(arena_.size());
    arena_.push_back(static_cast<std::uint32_t>(lits.size()) << 2 | (learnt ? 1u : 0u));
    arena_.push_back(std::bit_cast<std::uint32_t>(0.0f));
    arena_.insert(arena_.end(), lits.begin(), lits.end());
    return c;
}

void Solver::attach(CRef c)
{
    const Lit* lits = clause_lits(c);
    watches_[lits[0] ^ 1u].push_back({c, lits[1]});
    watches_[lits[1] ^ 1u].push_back({c, lits[0]});
}

bool Solver::add_clause(std::span<const Literal> input)
{
    if (!ok_) return false;
    std::vector<Lit> lits;
    lits.reserve(input.size());
    for (const Literal& l : input) {
        ensure_vars(l.var.index);
        lits.push_back(to_lit(l));
    }
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> kept;
    kept.reserve(lits.size());
    Lit prev = undef_lit;
    for (Lit p : lits) {
        if (p == prev) continue;
        if (prev != undef_lit && p == (prev ^ 1u)) return true; // tautology
        const std::uint8_t v = value(p);
        if (v == l_true && level_[var_of(p)] == 0) return true;
        if (!(v == l_false && level_[var_of(p)] == 0)) kept.push_back(p);
        prev = p;
    }
    if (kept.empty()) {
        ok_ = false;
        return false;
    }
    if (kept.size() == 1) {
        enqueue(kept[0], no_reason);
        ok_ = propagate() == no_reason;
        return ok_;
    }
    const CRef c = alloc_clause(kept, false);
    clauses_.push_back(c);
    attach(c);
    return true;
}

void Solver::enqueue(Lit p, CRef reason)
{
    const std::uint32_t v = var_of(p);
    assigns_[v] = sign_of(p) ? l_false : l_true;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(p);
}

Solver::CRef Solver::propagate()
{
    CRef confl = no_reason;
    while (qhead_ < trail_.size()) {
        const Lit p = trail_[qhead_++];
        const Lit false_lit = p ^ 1u;
        std::vector<Watcher>& ws = watches_[p];
        ++stats_.propagations;
        std::size_t i = 0;
        std::size_t j = 0;
        const std::size_t end = ws.size();
        while (i < end) {
            const Watcher w = ws[i];
            if (value(w.blocker) == l_true) {
                ws[j++] = ws[i++];
                continue;
            }
            Lit* lits = clause_lits(w.cref);
            if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
            ++i;
            const Lit first = lits[0];
            if (first != w.blocker && value(first) == l_true) {
                ws[j++] = {w.cref, first};
                continue;
            }
            const std::uint32_t size = clause_size(w.cref);
            bool moved = false;
            for (std::uint32_t k = 2; k < size; ++k) {
                if (value(lits[k]) != l_false) {
                    lits[1] = lits[k];
                    lits[k] = false_lit;
                    watches_[lits[1] ^ 1u].push_back({w.cref, first});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = {w.cref, first};
            if (value(first) == l_false) {
                confl = w.cref;
                qhead_ = trail_.size();
                while (i < end) ws[j++] = ws[i++];
            } else {
                enqueue(first, w.cref);
            }
        }
        ws.resize(j);
        if (confl != no_reason) break;
    }
    return confl;
}

void Solver::analyze(CRef confl, std::vector<Lit>& out, std::uint32_t& bt_level)
{
    out.clear();
    out.push_back(undef_lit);
    int path = 0;
    Lit p = undef_lit;
    std::size_t index = trail_.size();

    do {
        if (clause_learnt(confl)) bump_clause(confl);
        const Lit* lits = clause_lits(confl);
        const std::uint32_t size = clause_size(confl);
        for (std::uint32_t j = (p == undef_lit ? 0 : 1); j < size; ++j) {
            const Lit q = lits[j];
            const std::uint32_t v = var_of(q);
            if (!seen_[v] && level_[v] > 0) {
                bump_var(v);
                seen_[v] = 1;
                if (level_[v] >= decision_level()) {
                    ++path;
                } else {
                    out.push_back(q);
                }
            }
        }
        do {
            --index;
        } while (!seen_[var_of(trail_[index])]);
        p = trail_[index];
        confl = reason_[var_of(p)];
        seen_[var_of(p)] = 0;
        --path;
    } while (path > 0);
    out[0] = p ^ 1u;

    // Drop literals implied by others already in the clause.
    analyze_stack_.assign(out.begin(), out.end());
    std::size_t j = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const CRef r = reason_[var_of(out[i])];
        bool keep = r == no_reason;
        if (!keep) {
            const Lit* lits = clause_lits(r);
            for (std::uint32_t k = 1; k < clause_size(r); ++k) {
                const std::uint32_t v = var_of(lits[k]);
                if (!seen_[v] && level_[v] > 0) {
                    keep = true;
                    break;
                }
            }
        }
        if (keep) out[j++] = out[i];
    }
    out.resize(j);
    for (Lit l : analyze_stack_) seen_[var_of(l)] = 0;

    if (out.size() == 1) {
        bt_level = 0;
        return;
    }
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < out.size(); ++i) {
        if (level_[var_of(out[i])] > level_[var_of(out[max_i])]) max_i = i;
    }
    std::swap(out[1], out[max_i]);
    bt_level = level_[var_of(out[1])];
}

void Solver::cancel_until(std::uint32_t level)
{
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
        const std::uint32_t v = var_of(trail_[i]);
        phase_[v] = assigns_[v];
        assigns_[v] = l_undef;
        reason_[v] = no_reason;
        heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
}

void Solver::bump_var(std::uint32_t v)
{
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (double& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void Solver::bump_clause(CRef c)
{
    const float a = clause_activity(c) + cla_inc_;
    set_clause_activity(c, a);
    if (a > 1e20f) {
        for (CRef l : learnts_) set_clause_activity(l, clause_activity(l) * 1e-20f);
        cla_inc_ *= 1e-20f;
    }
}

void Solver::heap_insert(std::uint32_t v)
{
    if (heap_pos_[v] >= 0) return;
    heap_pos_[v] = static_cast<std::int32_t>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i)
{
    const std::uint32_t v = heap_[i];
    while (i > 0) {
        const std::size_t parent = (i - 1) / 2;
        if (!heap_lt(v, heap_[parent])) break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = static_cast<std::int32_t>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<std::int32_t>(i);
}

void Solver::heap_down(std::size_t i)
{
    const std::uint32_t v = heap_[i];
    for (;;) {
        std::size_t child = 2 * i + 1;
        if (child >= heap_.size()) break;
        if (child + 1 < heap_.size() && heap_lt(heap_[child + 1], heap_[child])) ++child;
        if (!heap_lt(heap_[child], v)) break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = static_cast<std::int32_t>(i);
        i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<std::int32_t>(i);
}

std::uint32_t Solver::heap_pop()
{
    const std::uint32_t top = heap_[0];
    heap_pos_[top] = -1;
    const std::uint32_t last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return top;
}

bool Solver::out_of_budget(const Limits& limits, std::uint64_t start_conflicts) const
{
    if (limits.max_conflicts != 0 && stats_.conflicts - start_conflicts >= limits.max_conflicts) return true;
    return limits.deadline && Clock::now() >= *limits.deadline;
}

Status Solver::search(std::uint64_t conflict_budget, std::span<const Literal> assumptions, const Limits& limits,
                      bool& budget_exhausted)
{
    const std::uint64_t start_conflicts = stats_.conflicts;
    std::uint64_t local_conflicts = 0;
    std::vector<Lit> learnt;
    for (;;) {
        const CRef confl = propagate();
        if (confl != no_reason) {
            ++stats_.conflicts;
            ++local_conflicts;
            if (decision_level() == 0) {
                ok_ = false;
                return Status::unsat;
            }
            std::uint32_t bt = 0;
            analyze(confl, learnt, bt);
            cancel_until(bt);
            if (learnt.size() == 1) {
                enqueue(learnt[0], no_reason);
            } else {
                const CRef c = alloc_clause(learnt, true);
                learnts_.push_back(c);
                attach(c);
                bump_clause(c);
                enqueue(learnt[0], c);
            }
            decay();
            if ((local_conflicts & 63) == 0 && out_of_budget(limits, start_conflicts)) {
                budget_exhausted = true;
                return Status::unknown;
            }
            continue;
        }

        if (local_conflicts >= conflict_budget) {
            cancel_until(0);
            return Status::unknown;
        }

        Lit next = undef_lit;
        while (decision_level() < assumptions.size()) {
            const Lit p = to_lit(assumptions[decision_level()]);
            const std::uint8_t v = value(p);
            if (v == l_true) {
                trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
            } else if (v == l_false) {
                return Status::unsat;
            } else {
                next = p;
                break;
            }
        }
        if (next == undef_lit) {
            while (!heap_.empty()) {
                const std::uint32_t v = heap_pop();
                if (assigns_[v] == l_undef) {
                    next = 2 * v + (phase_[v] == l_true ? 0u : 1u);
                    break;
                }
            }
            if (next == undef_lit) {
                model_ = assigns_;
                return Status::sat;
            }
        }
        ++stats_.decisions;
        trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
        enqueue(next, no_reason);
    }
}

void Solver::collect_level0(bool reduce_learnts)
{
    if (reduce_learnts) {
        std::vector<CRef> sorted = learnts_;
        std::sort(sorted.begin(), sorted.end(), [&](CRef a, CRef b) {
            return clause_activity(a) < clause_activity(b);
        });
        for (std::size_t i = 0; i < sorted.size() / 2; ++i) {
            if (clause_size(sorted[i]) > 2) mark_deleted(sorted[i]);
        }
        ++stats_.reductions;
    }

    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena_.size());
    std::vector<Lit> lits;
    auto relocate = [&](std::vector<CRef>& list, bool learnt) {
        std::size_t j = 0;
        for (CRef c : list) {
            if (clause_deleted(c)) continue;
            lits.clear();
            bool satisfied = false;
            const Lit* src = clause_lits(c);
            for (std::uint32_t k = 0; k < clause_size(c); ++k) {
                const std::uint8_t v = value(src[k]);
                if (v == l_true) {
                    satisfied = true;
                    break;
                }
                if (v == l_undef) lits.push_back(src[k]);
            }
            if (satisfied || lits.size() < 2) continue;
            const CRef nc = static_cast<CRef>(fresh.size());
            fresh.push_back(static_cast<std::uint32_t>(lits.size()) << 2 | (learnt ? 1u : 0u));
            fresh.push_back(arena_[c + 1]);
            fresh.insert(fresh.end(), lits.begin(), lits.end());
            list[j++] = nc;
        }
        list.resize(j);
    };
    relocate(clauses_, false);
    relocate(learnts_, true);
    arena_ = std::move(fresh);

    for (Lit p : trail_) reason_[var_of(p)] = no_reason;
    for (auto& ws : watches_) ws.clear();
    for (CRef c : clauses_) attach(c);
    for (CRef c : learnts_) attach(c);
}

Status Solver::solve(std::span<const Literal> assumptions, const Limits& limits)
{
    ++stats_.solves;
    model_.clear();
    if (!ok_) return Status::unsat;
    for (const Literal& l : assumptions) ensure_vars(l.var.index);
    if (max_learnts_ == 0) max_learnts_ = std::max(2000.0, static_cast<double>(clauses_.size()) / 3.0);

    Status status = Status::unknown;
    bool budget_exhausted = false;
    for (std::uint64_t restart = 0;; ++restart) {
        const auto budget = static_cast<std::uint64_t>(luby(2.0, restart) * restart_base);
        status = search(budget, assumptions, limits, budget_exhausted);
        if (status != Status::unknown || budget_exhausted) break;
        ++stats_.restarts;
        if (static_cast<double>(learnts_.size()) >= max_learnts_) {
            collect_level0(true);
            max_learnts_ *= 1.1;
        }
        if (limits.deadline && Clock::now() >= *limits.deadline) break;
    }
    cancel_until(0);
    return status;
}

BitVec Solver::model_prefix(std::uint32_t n) const
{
    BitVec out(n);
    for (std::uint32_t v = 0; v < n; ++v) out.set(v, model_[v] == l_true);
    return out;
}

} // namespace amc::sat
