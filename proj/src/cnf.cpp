#include "amc/cnf.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace amc {

namespace {

// Removes repeated literals (first occurrence wins). Returns false if the
// clause contains both polarities of a variable.
bool normalize_clause(Clause& c)
{
    Clause out;
    out.reserve(c.size());
    for (const Literal& lit : c) {
        bool dup = false;
        for (const Literal& seen : out) {
            if (seen.var == lit.var) {
                if (seen.negated != lit.negated) return false;
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(lit);
    }
    c = std::move(out);
    return true;
}

bool parse_int(std::string_view tok, long long& value)
{
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) toks.push_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

} // namespace

CnfFormula::CnfFormula(std::uint32_t num_vars, std::vector<Clause> clauses) : num_vars_(num_vars)
{
    if (num_vars == 0) throw std::invalid_argument("formula must declare at least one variable");
    clauses_.reserve(clauses.size());
    for (Clause& c : clauses) {
        for (const Literal& lit : c) {
            if (lit.var.index == 0 || lit.var.index > num_vars) {
                throw std::invalid_argument("literal " + std::to_string(lit.to_dimacs()) +
                                            " outside declared variable range");
            }
        }
        if (normalize_clause(c)) {
            clauses_.push_back(std::move(c));
        } else {
            ++dropped_tautologies_;
        }
    }
    header_clauses_ = clauses_.size() + dropped_tautologies_;
}

std::size_t CnfFormula::num_literals() const
{
    std::size_t total = 0;
    for (const Clause& c : clauses_) total += c.size();
    return total;
}

bool CnfFormula::has_empty_clause() const
{
    return std::any_of(clauses_.begin(), clauses_.end(), [](const Clause& c) { return c.empty(); });
}

CnfFormula parse_dimacs(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    long long n = 0;
    long long m = 0;
    std::vector<Clause> clauses;
    Clause current;
    bool open_clause = false;

    while (std::getline(in, line)) {
        ++lineno;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        const std::string_view first = toks.front();
        if (first[0] == 'c') continue;
        if (first == "%") break; // SATLIB trailer
        if (first[0] == 'p') {
            if (have_header) throw DimacsError(lineno, "duplicate problem line");
            if (toks.size() != 4 || first != "p" || toks[1] != "cnf" || !parse_int(toks[2], n) ||
                !parse_int(toks[3], m) || n < 0 || m < 0) {
                throw DimacsError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
            }
            if (n == 0) throw DimacsError(lineno, "header declares zero variables");
            if (n > 0xffffffffLL) throw DimacsError(lineno, "too many variables");
            have_header = true;
            continue;
        }
        if (!have_header) throw DimacsError(lineno, "clause data before 'p cnf' header");
        for (std::string_view tok : toks) {
            long long lit = 0;
            if (!parse_int(tok, lit)) {
                throw DimacsError(lineno, "unexpected token '" + std::string(tok) + "'");
            }
            if (lit == 0) {
                clauses.push_back(std::move(current));
                current.clear();
                open_clause = false;
                continue;
            }
            if (lit > n || -lit > n) {
                throw DimacsError(lineno, "literal " + std::string(tok) + " exceeds declared " +
                                              std::to_string(n) + " variables");
            }
            current.push_back(Literal::from_dimacs(lit));
            open_clause = true;
        }
    }
    if (!have_header) throw DimacsError(lineno, "missing 'p cnf' header");
    // A final clause missing its terminating 0 is accepted.
    if (open_clause) clauses.push_back(std::move(current));

    const std::size_t read_clauses = clauses.size();
    CnfFormula f(static_cast<std::uint32_t>(n), std::move(clauses));
    f.header_clauses_ = static_cast<std::size_t>(m);
    f.header_mismatch_ = read_clauses != static_cast<std::size_t>(m);
    return f;
}

CnfFormula parse_dimacs(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_dimacs(in);
}

CnfFormula parse_dimacs_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_dimacs(in);
}

std::string serialize_dimacs(const CnfFormula& f)
{
    std::string out = "p cnf " + std::to_string(f.num_vars()) + " " + std::to_string(f.num_clauses()) + "\n";
    for (const Clause& c : f.clauses()) {
        for (const Literal& lit : c) {
            out += std::to_string(lit.to_dimacs());
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

bool evaluate(const CnfFormula& f, const Model& m)
{
    if (m.size() != f.num_vars()) {
        throw std::invalid_argument("model length " + std::to_string(m.size()) + " != num_vars " +
                                    std::to_string(f.num_vars()));
    }
    for (const Clause& c : f.clauses()) {
        bool sat = false;
        for (const Literal& lit : c) {
            if (m.get(lit.var.index - 1) != lit.negated) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

} // namespace amc
