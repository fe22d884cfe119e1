#include "amc/xor_hash.hpp"

#include <stdexcept>

namespace amc {

std::vector<Var> XorRow::vars() const
{
    std::vector<Var> out;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs.get(j)) out.push_back(Var{static_cast<std::uint32_t>(j + 1)});
    }
    return out;
}

XorHash::XorHash(std::uint32_t n, std::vector<XorRow> rows) : n_(n), rows_(std::move(rows))
{
    for (const XorRow& r : rows_) {
        if (r.coeffs.size() != n_) throw std::invalid_argument("xor row width does not match hash input size");
    }
}

BitVec XorHash::apply(const BitVec& y) const
{
    if (y.size() != n_) {
        throw std::invalid_argument("hash input has " + std::to_string(y.size()) + " bits, expected " +
                                    std::to_string(n_));
    }
    BitVec out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        out.set(i, rows_[i].offset ^ rows_[i].coeffs.and_parity(y));
    }
    return out;
}

std::string XorHash::dump() const
{
    std::string s;
    for (const XorRow& r : rows_) {
        s += "xor ";
        s += r.offset ? '1' : '0';
        s += " :";
        for (Var v : r.vars()) {
            s += " v";
            s += std::to_string(v.index);
        }
        s += '\n';
    }
    return s;
}

XorHash sample_hash(std::uint32_t n, std::uint32_t m, RandomSource& rng)
{
    if (n == 0) throw std::invalid_argument("hash needs at least one input variable");
    std::vector<XorRow> rows(m);
    for (XorRow& r : rows) {
        r.offset = rng.next_bit();
        r.coeffs = BitVec(n);
        for (std::uint32_t j = 0; j < n; ++j) r.coeffs.set(j, rng.next_bit());
    }
    return XorHash(n, std::move(rows));
}

CellTarget sample_alpha(std::uint32_t m, RandomSource& rng)
{
    CellTarget alpha(m);
    for (std::uint32_t i = 0; i < m; ++i) alpha.set(i, rng.next_bit());
    return alpha;
}

void append_parity_clauses(const std::vector<Var>& vars, bool parity, std::vector<Clause>& out)
{
    const std::size_t k = vars.size();
    if (k >= 24) throw std::invalid_argument("direct parity encoding too wide");
    // Forbid every sign pattern whose parity is wrong.
    for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
        if (static_cast<bool>(std::popcount(pattern) & 1) == parity) continue;
        Clause c;
        c.reserve(k);
        for (std::size_t i = 0; i < k; ++i) c.push_back(Literal{vars[i], ((pattern >> i) & 1u) != 0});
        out.push_back(std::move(c));
    }
}

XorEncoding encode_constraint(const XorHash& h, const CellTarget& alpha, std::uint32_t next_free_var,
                              unsigned chunk_width)
{
    if (alpha.size() != h.m()) throw std::invalid_argument("cell target length does not match hash rows");
    if (next_free_var <= h.n()) throw std::invalid_argument("auxiliary numbering overlaps input variables");
    if (chunk_width < 2) throw std::invalid_argument("chunk width must be at least 2");

    XorEncoding enc;
    enc.next_free_var = next_free_var;
    for (std::size_t i = 0; i < h.m(); ++i) {
        const XorRow& row = h.rows()[i];
        std::vector<Var> inputs = row.vars();
        const bool target = alpha.get(i) ^ row.offset;
        while (inputs.size() > chunk_width + 1) {
            const Var aux{enc.next_free_var++};
            enc.aux_vars.push_back(aux);
            std::vector<Var> chunk(inputs.begin(), inputs.begin() + chunk_width);
            chunk.push_back(aux);
            append_parity_clauses(chunk, false, enc.clauses); // aux == parity(chunk inputs)
            inputs.erase(inputs.begin(), inputs.begin() + chunk_width);
            inputs.insert(inputs.begin(), aux);
        }
        append_parity_clauses(inputs, target, enc.clauses);
    }
    return enc;
}

} // namespace amc
