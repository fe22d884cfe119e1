#include "amc/bounded_sat.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace amc {

namespace {

std::uint32_t max_var(std::span<const Clause> clauses, std::uint32_t floor)
{
    std::uint32_t n = floor;
    for (const Clause& c : clauses) {
        for (const Literal& l : c) n = std::max(n, l.var.index);
    }
    return n;
}

template <class Oracle>
EnumerationResult enumerate(Oracle& oracle, const BoundedQuery& q)
{
    if (q.bound == 0) throw std::invalid_argument("enumeration bound must be at least 1");
    const std::uint32_t n = q.formula.num_vars();
    oracle.ensure_vars(max_var(q.constraint_clauses, n));
    for (const Clause& c : q.formula.clauses()) oracle.add_clause(c);
    for (const Clause& c : q.constraint_clauses) oracle.add_clause(c);

    sat::Limits limits;
    if (q.time_budget) limits.deadline = sat::Clock::now() + *q.time_budget;

    EnumerationResult result;
    Clause blocking;
    while (result.models.size() < q.bound) {
        if (limits.deadline && sat::Clock::now() >= *limits.deadline) {
            result.outcome = EnumerationResult::Outcome::timed_out;
            break;
        }
        ++result.sat_calls;
        const sat::Status st = oracle.solve({}, limits);
        if (st == sat::Status::unknown) {
            result.outcome = EnumerationResult::Outcome::timed_out;
            break;
        }
        if (st == sat::Status::unsat) break;
        Model m = oracle.model_prefix(n);
        // Block this projection only; auxiliaries are determined by it.
        blocking.clear();
        for (std::uint32_t v = 0; v < n; ++v) blocking.push_back(Literal{Var{v + 1}, m.get(v)});
        result.models.push_back(std::move(m));
        if (result.models.size() < q.bound) oracle.add_clause(blocking);
    }
    return result;
}

} // namespace

EnumerationResult bounded_sat(const BoundedQuery& q)
{
    sat::Solver solver;
    return enumerate(solver, q);
}

EnumerationResult bounded_sat_external(const BoundedQuery& q, const std::string& command)
{
    ExternalSolver solver(command);
    return enumerate(solver, q);
}

std::optional<BitVec> solve_once(std::span<const Clause> clauses, std::uint32_t n_total,
                                 std::span<const Literal> assumptions)
{
    sat::Solver solver(max_var(clauses, n_total));
    for (const Clause& c : clauses) solver.add_clause(c);
    if (solver.solve(assumptions) != sat::Status::sat) return std::nullopt;
    return solver.model_prefix(n_total);
}

bool ExternalSolver::add_clause(std::span<const Literal> lits)
{
    for (const Literal& l : lits) ensure_vars(l.var.index);
    clauses_.emplace_back(lits.begin(), lits.end());
    return true;
}

sat::Status ExternalSolver::solve(std::span<const Literal> assumptions, const sat::Limits& limits)
{
    if (limits.deadline && sat::Clock::now() >= *limits.deadline) return sat::Status::unknown;
    for (const Literal& l : assumptions) ensure_vars(l.var.index);

    char path[] = "/tmp/amc-dimacs-XXXXXX";
    const int fd = mkstemp(path);
    if (fd < 0) throw std::runtime_error("cannot create temporary DIMACS file");
    {
        std::ostringstream out;
        out << "p cnf " << std::max<std::uint32_t>(num_vars_, 1) << ' ' << clauses_.size() + assumptions.size()
            << '\n';
        for (const Clause& c : clauses_) {
            for (const Literal& l : c) out << l.to_dimacs() << ' ';
            out << "0\n";
        }
        for (const Literal& l : assumptions) out << l.to_dimacs() << " 0\n";
        const std::string text = out.str();
        std::size_t written = 0;
        while (written < text.size()) {
            const ssize_t w = ::write(fd, text.data() + written, text.size() - written);
            if (w <= 0) {
                ::close(fd);
                ::unlink(path);
                throw std::runtime_error("cannot write temporary DIMACS file");
            }
            written += static_cast<std::size_t>(w);
        }
        ::close(fd);
    }

    const std::string cmd = command_ + " < " + path;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        ::unlink(path);
        throw std::runtime_error("cannot spawn external solver: " + command_);
    }
    ++spawns_;
    std::string output;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    ::pclose(pipe);
    ::unlink(path);

    return parse_competition_output(output, num_vars_, model_);
}

BitVec ExternalSolver::model_prefix(std::uint32_t n) const
{
    BitVec out(n);
    for (std::uint32_t v = 0; v < n && v < model_.size(); ++v) out.set(v, model_[v]);
    return out;
}

sat::Status parse_competition_output(const std::string& text, std::uint32_t num_vars, std::vector<bool>& model)
{
    std::istringstream in(text);
    std::string line;
    sat::Status status = sat::Status::unknown;
    model.assign(num_vars, false);
    while (std::getline(in, line)) {
        if (line.rfind("s ", 0) == 0) {
            if (line.find("UNSATISFIABLE") != std::string::npos) {
                status = sat::Status::unsat;
            } else if (line.find("SATISFIABLE") != std::string::npos) {
                status = sat::Status::sat;
            }
        } else if (line.rfind("v ", 0) == 0 || line == "v") {
            std::istringstream vs(line.substr(1));
            long long lit = 0;
            while (vs >> lit) {
                if (lit == 0) break;
                const auto v = static_cast<std::uint64_t>(lit < 0 ? -lit : lit);
                if (v <= num_vars) model[v - 1] = lit > 0;
            }
        }
    }
    return status;
}

} // namespace amc
