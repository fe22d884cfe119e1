#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "amc/cnf.hpp"
#include "amc/xor_hash.hpp"

namespace amc {

constexpr std::uint32_t default_oracle_limit = 30;
// Hard ceiling imposed by the 64-bit assignment representation.
constexpr std::uint32_t max_oracle_limit = 62;

class OracleRangeError : public std::runtime_error {
public:
    OracleRangeError(std::uint32_t num_vars, std::uint32_t limit)
        : std::runtime_error("oracle out of range: " + std::to_string(num_vars) + " variables exceeds limit " +
                             std::to_string(limit))
    {
    }
};

// |R_F| by exhaustive search over z_1..z_n in index order, cutting a branch
// as soon as a clause whose variables are all assigned is falsified.
std::uint64_t exact_count(const CnfFormula& f, std::uint32_t limit_vars = default_oracle_limit);

// Same count evaluated 64 assignments at a time; an independent route used
// to cross-check exact_count.
std::uint64_t exact_count_bitparallel(const CnfFormula& f, std::uint32_t limit_vars = default_oracle_limit);

// |{y : F(y) and h(y) == alpha}| by direct enumeration, without any CNF
// encoding of the parity constraints.
std::uint64_t count_with_xor(const CnfFormula& f, const XorHash& h, const CellTarget& alpha,
                             std::uint32_t limit_vars = default_oracle_limit);

} // namespace amc
