#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "amc/bitvec.hpp"

namespace amc {

// 1-based propositional variable.
struct Var {
    std::uint32_t index = 0;
    friend auto operator<=>(const Var&, const Var&) = default;
};

struct Literal {
    Var var;
    bool negated = false;

    static Literal from_dimacs(long long lit)
    {
        return lit < 0 ? Literal{Var{static_cast<std::uint32_t>(-lit)}, true}
                       : Literal{Var{static_cast<std::uint32_t>(lit)}, false};
    }
    long long to_dimacs() const
    {
        return negated ? -static_cast<long long>(var.index) : static_cast<long long>(var.index);
    }
    Literal operator~() const { return Literal{var, !negated}; }

    friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

// Total assignment to z_1..z_n; bit i holds the value of z_{i+1}.
using Model = BitVec;

class DimacsError : public std::runtime_error {
public:
    DimacsError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Immutable CNF formula over variables 1..num_vars. Clauses are normalized on
// construction: duplicate literals removed, tautologies dropped.
class CnfFormula {
public:
    CnfFormula(std::uint32_t num_vars, std::vector<Clause> clauses);

    std::uint32_t num_vars() const { return num_vars_; }
    const std::vector<Clause>& clauses() const { return clauses_; }
    std::size_t num_clauses() const { return clauses_.size(); }
    std::size_t num_literals() const;
    bool has_empty_clause() const;

    // Diagnostics from parsing.
    std::size_t header_clause_count() const { return header_clauses_; }
    bool clause_count_mismatch() const { return header_mismatch_; }
    std::size_t dropped_tautologies() const { return dropped_tautologies_; }

    friend bool operator==(const CnfFormula& a, const CnfFormula& b)
    {
        return a.num_vars_ == b.num_vars_ && a.clauses_ == b.clauses_;
    }

private:
    friend CnfFormula parse_dimacs(std::istream& in);

    std::uint32_t num_vars_;
    std::vector<Clause> clauses_;
    std::size_t header_clauses_ = 0;
    bool header_mismatch_ = false;
    std::size_t dropped_tautologies_ = 0;
};

CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(std::string_view text);
CnfFormula parse_dimacs_file(const std::string& path);

std::string serialize_dimacs(const CnfFormula& f);

bool evaluate(const CnfFormula& f, const Model& m);

} // namespace amc
