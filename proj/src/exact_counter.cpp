#include "amc/exact_counter.hpp"

#include <algorithm>
#include <bit>
#include <vector>

namespace amc {

namespace {

struct MaskClause {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
};

struct MaskRow {
    std::uint64_t coeffs = 0;
    bool target = false; // required parity of (coeffs AND y)
};

void check_range(const CnfFormula& f, std::uint32_t limit_vars)
{
    const std::uint32_t limit = std::min(limit_vars, max_oracle_limit);
    if (f.num_vars() > limit) throw OracleRangeError(f.num_vars(), limit);
}

// Constraints bucketed by the highest variable they mention, so each one is
// checked exactly once, at the depth where it becomes fully assigned.
class Enumerator {
public:
    Enumerator(const CnfFormula& f, const std::vector<MaskRow>& rows) : n_(f.num_vars()), clauses_at_(n_), rows_at_(n_)
    {
        for (const Clause& c : f.clauses()) {
            if (c.empty()) {
                unsat_ = true;
                continue;
            }
            MaskClause mc;
            std::uint32_t top = 0;
            for (const Literal& l : c) {
                const std::uint64_t bit = std::uint64_t{1} << (l.var.index - 1);
                (l.negated ? mc.neg : mc.pos) |= bit;
                top = std::max(top, l.var.index - 1);
            }
            clauses_at_[top].push_back(mc);
        }
        for (const MaskRow& r : rows) {
            if (r.coeffs == 0) {
                if (r.target) unsat_ = true;
                continue;
            }
            rows_at_[63 - std::countl_zero(r.coeffs)].push_back(r);
        }
        // free_from_[d]: nothing is checked at depth >= d.
        free_from_.assign(n_ + 1, false);
        free_from_[n_] = true;
        for (std::uint32_t d = n_; d-- > 0;) {
            free_from_[d] = free_from_[d + 1] && clauses_at_[d].empty() && rows_at_[d].empty();
        }
    }

    std::uint64_t run()
    {
        if (unsat_) return 0;
        return descend(0, 0);
    }

private:
    std::uint64_t descend(std::uint32_t depth, std::uint64_t assignment) const
    {
        if (free_from_[depth]) return std::uint64_t{1} << (n_ - depth);
        std::uint64_t total = 0;
        for (std::uint64_t value = 0; value < 2; ++value) {
            const std::uint64_t a = assignment | (value << depth);
            if (consistent(depth, a)) total += descend(depth + 1, a);
        }
        return total;
    }

    bool consistent(std::uint32_t depth, std::uint64_t a) const
    {
        for (const MaskClause& c : clauses_at_[depth]) {
            if (((a & c.pos) | (~a & c.neg)) == 0) return false;
        }
        for (const MaskRow& r : rows_at_[depth]) {
            if (static_cast<bool>(std::popcount(a & r.coeffs) & 1) != r.target) return false;
        }
        return true;
    }

    std::uint32_t n_;
    bool unsat_ = false;
    std::vector<std::vector<MaskClause>> clauses_at_;
    std::vector<std::vector<MaskRow>> rows_at_;
    std::vector<bool> free_from_;
};

} // namespace

std::uint64_t exact_count(const CnfFormula& f, std::uint32_t limit_vars)
{
    check_range(f, limit_vars);
    return Enumerator(f, {}).run();
}

std::uint64_t exact_count_bitparallel(const CnfFormula& f, std::uint32_t limit_vars)
{
    check_range(f, limit_vars);
    if (f.has_empty_clause()) return 0;
    static constexpr std::uint64_t lane_pattern[6] = {
        0xaaaaaaaaaaaaaaaaULL, 0xccccccccccccccccULL, 0xf0f0f0f0f0f0f0f0ULL,
        0xff00ff00ff00ff00ULL, 0xffff0000ffff0000ULL, 0xffffffff00000000ULL,
    };
    const std::uint32_t n = f.num_vars();
    const std::uint32_t lane_vars = std::min<std::uint32_t>(n, 6);
    const std::uint64_t lane_mask = lane_vars == 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (1u << lane_vars)) - 1;
    const std::uint64_t blocks = std::uint64_t{1} << (n - lane_vars);

    std::uint64_t total = 0;
    for (std::uint64_t block = 0; block < blocks; ++block) {
        std::uint64_t sat = lane_mask;
        for (const Clause& c : f.clauses()) {
            std::uint64_t any = 0;
            for (const Literal& l : c) {
                const std::uint32_t v = l.var.index - 1;
                std::uint64_t word = v < 6 ? lane_pattern[v] : (((block >> (v - 6)) & 1u) ? ~std::uint64_t{0} : 0);
                any |= l.negated ? ~word : word;
            }
            sat &= any;
            if (sat == 0) break;
        }
        total += static_cast<std::uint64_t>(std::popcount(sat));
    }
    return total;
}

std::uint64_t count_with_xor(const CnfFormula& f, const XorHash& h, const CellTarget& alpha,
                             std::uint32_t limit_vars)
{
    check_range(f, limit_vars);
    if (h.n() != f.num_vars()) throw std::invalid_argument("hash input size differs from formula variable count");
    if (alpha.size() != h.m()) throw std::invalid_argument("cell target length does not match hash rows");
    std::vector<MaskRow> rows;
    for (std::uint32_t i = 0; i < h.m(); ++i) {
        const XorRow& r = h.rows()[i];
        rows.push_back(MaskRow{r.coeffs.low_word(), static_cast<bool>(alpha.get(i) ^ r.offset)});
    }
    return Enumerator(f, rows).run();
}

} // namespace amc
