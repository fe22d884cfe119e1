#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amc/bitvec.hpp"
#include "amc/cnf.hpp"
#include "amc/random.hpp"

namespace amc {

// One output bit of a hash: offset XOR parity(coeffs AND y).
struct XorRow {
    bool offset = false;
    BitVec coeffs;

    std::vector<Var> vars() const;
    friend bool operator==(const XorRow&, const XorRow&) = default;
};

// Member of the family H_xor(n, m, 3): m random parity rows over n inputs.
class XorHash {
public:
    explicit XorHash(std::uint32_t n) : n_(n) {}
    XorHash(std::uint32_t n, std::vector<XorRow> rows);

    std::uint32_t n() const { return n_; }
    std::uint32_t m() const { return static_cast<std::uint32_t>(rows_.size()); }
    const std::vector<XorRow>& rows() const { return rows_; }

    BitVec apply(const BitVec& y) const;

    // One line per row: "xor <offset> : v_i1 v_i2 ..."
    std::string dump() const;

    friend bool operator==(const XorHash&, const XorHash&) = default;

private:
    std::uint32_t n_;
    std::vector<XorRow> rows_;
};

// alpha in {0,1}^m selecting one cell h^{-1}(alpha).
using CellTarget = BitVec;

// Draws offset then coefficients 1..n for each row in turn.
XorHash sample_hash(std::uint32_t n, std::uint32_t m, RandomSource& rng);
CellTarget sample_alpha(std::uint32_t m, RandomSource& rng);

struct XorEncoding {
    std::vector<Clause> clauses;
    std::vector<Var> aux_vars;
    std::uint32_t next_free_var = 0;
};

constexpr unsigned default_chunk_width = 4;

// CNF clauses over z_1..z_n plus fresh auxiliaries (numbered from
// next_free_var) that are satisfiable exactly when apply(h, z) == alpha.
// Rows wider than chunk_width + 1 are cut into chunks of chunk_width inputs,
// each chunk's parity carried forward in a new auxiliary variable, so every
// auxiliary is a function of the original variables.
XorEncoding encode_constraint(const XorHash& h, const CellTarget& alpha, std::uint32_t next_free_var,
                              unsigned chunk_width = default_chunk_width);

// Clauses forcing parity(vars) == parity over exactly the given variables.
void append_parity_clauses(const std::vector<Var>& vars, bool parity, std::vector<Clause>& out);

} // namespace amc
