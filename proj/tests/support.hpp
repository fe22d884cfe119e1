#pragma once

// Shared generators and brute-force oracles for the test suites. Everything
// here is deliberately naive: it enumerates assignments and calls evaluate()
// or XorHash::apply() directly, never the counting or encoding code paths.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "amc/cnf.hpp"
#include "amc/random.hpp"
#include "amc/xor_hash.hpp"

namespace amc::test {

inline CnfFormula random_kcnf(std::uint32_t n, std::size_t clauses, std::uint32_t k, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::uint32_t> pick_var(1, n);
    std::bernoulli_distribution coin(0.5);
    std::vector<Clause> cs;
    for (std::size_t c = 0; c < clauses; ++c) {
        Clause cl;
        std::set<std::uint32_t> used;
        while (cl.size() < std::min(k, n)) {
            const std::uint32_t v = pick_var(gen);
            if (!used.insert(v).second) continue;
            cl.push_back(Literal{Var{v}, coin(gen)});
        }
        cs.push_back(std::move(cl));
    }
    return CnfFormula(n, std::move(cs));
}

inline CnfFormula unconstrained(std::uint32_t n) { return CnfFormula(n, {}); }

inline BitVec assignment(std::uint64_t bits, std::uint32_t n) { return BitVec::from_uint(bits, n); }

// Naive model set by enumerating all 2^n assignments.
inline std::set<BitVec> brute_models(const CnfFormula& f)
{
    std::set<BitVec> out;
    const std::uint32_t n = f.num_vars();
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
        BitVec y = assignment(a, n);
        if (evaluate(f, y)) out.insert(std::move(y));
    }
    return out;
}

inline std::uint64_t brute_count(const CnfFormula& f) { return brute_models(f).size(); }

inline std::uint64_t brute_count_cell(const CnfFormula& f, const XorHash& h, const CellTarget& alpha)
{
    std::uint64_t c = 0;
    const std::uint32_t n = f.num_vars();
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
        const BitVec y = assignment(a, n);
        if (evaluate(f, y) && h.apply(y) == alpha) ++c;
    }
    return c;
}

// Does the full assignment (bit v-1 = variable v) satisfy every clause?
inline bool satisfies(const std::vector<Clause>& clauses, std::uint64_t bits)
{
    for (const Clause& c : clauses) {
        bool sat = false;
        for (const Literal& l : c) {
            if ((((bits >> (l.var.index - 1)) & 1u) != 0) != l.negated) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

// Pigeonhole: `pigeons` pigeons into `holes` holes, unsatisfiable when
// pigeons > holes. Variable p*holes + h + 1 means pigeon p sits in hole h.
inline CnfFormula pigeonhole(std::uint32_t pigeons, std::uint32_t holes)
{
    auto var = [&](std::uint32_t p, std::uint32_t h) { return Var{p * holes + h + 1}; };
    std::vector<Clause> cs;
    for (std::uint32_t p = 0; p < pigeons; ++p) {
        Clause c;
        for (std::uint32_t h = 0; h < holes; ++h) c.push_back(Literal{var(p, h), false});
        cs.push_back(c);
    }
    for (std::uint32_t h = 0; h < holes; ++h) {
        for (std::uint32_t p = 0; p < pigeons; ++p) {
            for (std::uint32_t q = p + 1; q < pigeons; ++q) {
                cs.push_back({Literal{var(p, h), true}, Literal{var(q, h), true}});
            }
        }
    }
    return CnfFormula(pigeons * holes, std::move(cs));
}

// Replays a fixed bit pattern, then repeats it.
class ScriptedBits final : public RandomSource {
public:
    explicit ScriptedBits(std::uint64_t word) : word_(word) {}

protected:
    std::uint64_t next_word() override { return word_; }

private:
    std::uint64_t word_;
};

} // namespace amc::test
