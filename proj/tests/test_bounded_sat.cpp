#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "amc/bounded_sat.hpp"
#include "amc/exact_counter.hpp"
#include "support.hpp"

using namespace amc;

namespace {

Literal lit(long long d) { return Literal::from_dimacs(d); }

CnfFormula three_models()
{
    return parse_dimacs("p cnf 2 1\n1 2 0\n"); // 01, 10, 11
}

EnumerationResult run(const CnfFormula& f, std::span<const Clause> extra, std::size_t bound,
                      std::optional<std::chrono::milliseconds> budget = std::nullopt)
{
    return bounded_sat(BoundedQuery{f, extra, bound, budget});
}

bool distinct(const std::vector<Model>& ms)
{
    return std::set<Model>(ms.begin(), ms.end()).size() == ms.size();
}

} // namespace

TEST_CASE("three models, bound above the count")
{
    const CnfFormula f = three_models();
    const auto r = run(f, {}, 5);
    CHECK(r.complete());
    CHECK(r.models.size() == 3);
    CHECK(distinct(r.models));
    CHECK(std::set<Model>(r.models.begin(), r.models.end()) == test::brute_models(f));
}

TEST_CASE("bound cuts enumeration short")
{
    const auto r = run(three_models(), {}, 2);
    CHECK(r.complete());
    CHECK(r.models.size() == 2);
    CHECK(distinct(r.models));
}

TEST_CASE("unsatisfiable formula")
{
    const CnfFormula f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
    const auto r = run(f, {}, 10);
    CHECK(r.complete());
    CHECK(r.models.empty());
    CHECK(r.sat_calls == 1);
}

TEST_CASE("zero bound is rejected")
{
    CHECK_THROWS_AS(run(three_models(), {}, 0), std::invalid_argument);
}

TEST_CASE("zero time budget times out")
{
    const CnfFormula f = test::unconstrained(8);
    const auto r = run(f, {}, 100, std::chrono::milliseconds(0));
    CHECK(r.timed_out());
    CHECK(r.partial_count() < 100);
}

TEST_CASE("constraint clauses restrict the models, projection hides auxiliaries")
{
    // x3 is an auxiliary above n = 2 forced equal to x1 xor x2, and the cell
    // asks x3 = 1.
    const CnfFormula f = test::unconstrained(2);
    std::vector<Clause> cs;
    append_parity_clauses({Var{1}, Var{2}, Var{3}}, false, cs);
    cs.push_back({lit(3)});
    const auto r = run(f, cs, 10);
    CHECK(r.complete());
    REQUIRE(r.models.size() == 2);
    for (const Model& m : r.models) {
        CHECK(m.size() == 2);
        CHECK(m.get(0) != m.get(1));
    }
}

TEST_CASE("n = 12 hashed query matches brute force")
{
    const CnfFormula f = test::random_kcnf(12, 18, 3, 4242);
    CounterRng rng(8);
    const XorHash h = sample_hash(12, 3, rng);
    const CellTarget alpha = sample_alpha(3, rng);
    const XorEncoding enc = encode_constraint(h, alpha, 13);
    const auto r = run(f, enc.clauses, 1000000);
    CHECK(r.complete());
    CHECK(r.models.size() == test::brute_count_cell(f, h, alpha));
    CHECK(distinct(r.models));
    for (const Model& m : r.models) {
        CHECK(evaluate(f, m));
        CHECK(h.apply(m) == alpha);
    }
}

TEST_CASE("property: |S| = min(v, #models) and S is a set of models")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::uint32_t n = 3 + static_cast<std::uint32_t>(seed % 10);
        const CnfFormula f = test::random_kcnf(n, n + seed % 7, 3, seed * 31 + 1);
        CounterRng rng(seed);
        const std::uint32_t m = static_cast<std::uint32_t>(seed % 3);
        const XorHash h = sample_hash(n, m, rng);
        const CellTarget alpha = sample_alpha(m, rng);
        const XorEncoding enc = encode_constraint(h, alpha, n + 1);
        const std::size_t total = test::brute_count_cell(f, h, alpha);
        for (std::size_t v : {std::size_t{1}, std::size_t{2}, total, total + 5}) {
            if (v == 0) continue;
            const auto r = run(f, enc.clauses, v);
            REQUIRE(r.complete());
            CHECK(r.models.size() == std::min(v, total));
            CHECK(distinct(r.models));
            for (const Model& y : r.models) {
                CHECK(evaluate(f, y));
                CHECK(h.apply(y) == alpha);
            }
        }
    }
}

TEST_CASE("deterministic for identical queries")
{
    const CnfFormula f = test::random_kcnf(16, 30, 3, 5);
    const auto a = run(f, {}, 50);
    const auto b = run(f, {}, 50);
    CHECK(a.models == b.models);
    CHECK(a.sat_calls == b.sat_calls);
}

TEST_CASE("agrees with count_with_xor on random triples")
{
    CounterRng rng(2024);
    for (int k = 0; k < 60; ++k) {
        const std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.uniform(9));
        const CnfFormula f = test::random_kcnf(n, rng.uniform(2 * n), 3, rng.uniform(1u << 30));
        const std::uint32_t m = static_cast<std::uint32_t>(rng.uniform(4));
        const XorHash h = sample_hash(n, m, rng);
        const CellTarget alpha = sample_alpha(m, rng);
        const auto r = run(f, encode_constraint(h, alpha, n + 1).clauses, std::size_t{1} << n);
        CHECK(r.models.size() == count_with_xor(f, h, alpha));
    }
}

#ifdef AMC_CLI_PATH
TEST_CASE("external solver adapter")
{
    const std::string cmd = std::string(AMC_CLI_PATH) + " solve -";
    const CnfFormula f = test::random_kcnf(8, 14, 3, 77);
    CounterRng rng(3);
    const XorHash h = sample_hash(8, 2, rng);
    const CellTarget alpha = sample_alpha(2, rng);
    const XorEncoding enc = encode_constraint(h, alpha, 9);
    const BoundedQuery q{f, enc.clauses, 1000, std::nullopt};
    const auto ext = bounded_sat_external(q, cmd);
    const auto internal = bounded_sat(q);
    CHECK(ext.complete());
    CHECK(ext.models.size() == internal.models.size());
    CHECK(std::set<Model>(ext.models.begin(), ext.models.end()) ==
          std::set<Model>(internal.models.begin(), internal.models.end()));

    const CnfFormula unsat = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
    CHECK(bounded_sat_external(BoundedQuery{unsat, {}, 3, std::nullopt}, cmd).models.empty());
}

TEST_CASE("external solver that cannot run reports a timeout")
{
    const CnfFormula f = test::unconstrained(2);
    const auto r = bounded_sat_external(BoundedQuery{f, {}, 3, std::nullopt}, "/nonexistent/solver 2>/dev/null");
    CHECK(r.timed_out());
}
#endif
