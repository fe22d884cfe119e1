#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "amc/bounded_sat.hpp"
#include "amc/exact_counter.hpp"
#include "support.hpp"

using namespace amc;

namespace {

// Relabels variable v as perm[v-1] + 1 throughout.
CnfFormula permute(const CnfFormula& f, const std::vector<std::uint32_t>& perm)
{
    std::vector<Clause> cs;
    for (const Clause& c : f.clauses()) {
        Clause out;
        for (const Literal& l : c) out.push_back(Literal{Var{perm[l.var.index - 1] + 1}, l.negated});
        cs.push_back(out);
    }
    return CnfFormula(f.num_vars(), cs);
}

} // namespace

TEST_CASE("small examples")
{
    CHECK(exact_count(parse_dimacs("p cnf 2 1\n1 2 0\n")) == 3);
    CHECK(exact_count(test::unconstrained(10)) == 1024);
    CHECK(exact_count(parse_dimacs("p cnf 3 2\n1 0\n-1 0\n")) == 0);
    CHECK(exact_count(parse_dimacs("p cnf 3 1\n0\n")) == 0);
    CHECK(exact_count_bitparallel(parse_dimacs("p cnf 2 1\n1 2 0\n")) == 3);
    CHECK(exact_count_bitparallel(test::unconstrained(10)) == 1024);
    CHECK(exact_count_bitparallel(test::unconstrained(3)) == 8);
}

TEST_CASE("range limit")
{
    CHECK_THROWS_AS(exact_count(test::unconstrained(25), 22), OracleRangeError);
    CHECK_THROWS_AS(exact_count_bitparallel(test::unconstrained(25), 22), OracleRangeError);
    CHECK_THROWS_AS(exact_count(test::unconstrained(63), 100), OracleRangeError);
    CHECK(exact_count(test::unconstrained(22), 22) == (1u << 22));
    try {
        exact_count(test::unconstrained(25), 22);
    } catch (const OracleRangeError& e) {
        CHECK(std::string(e.what()).find("oracle out of range") != std::string::npos);
    }
}

TEST_CASE("free tail: large unconstrained formula counts instantly")
{
    CHECK(exact_count(test::unconstrained(40), 62) == (std::uint64_t{1} << 40));
    const CnfFormula f = parse_dimacs("p cnf 50 1\n1 2 0\n");
    CHECK(exact_count(f, 62) == 3 * (std::uint64_t{1} << 48));
}

TEST_CASE("three independent routes agree")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const CnfFormula f = test::random_kcnf(14, 40, 3, seed);
        const std::uint64_t naive = test::brute_count(f);
        CHECK(exact_count(f) == naive);
        CHECK(exact_count_bitparallel(f) == naive);
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(seed % 12);
        const CnfFormula f = test::random_kcnf(n, seed % 25, 1 + seed % 4, seed + 1000);
        const std::uint64_t naive = test::brute_count(f);
        CHECK(exact_count(f) == naive);
        CHECK(exact_count_bitparallel(f) == naive);
    }
}

TEST_CASE("count_with_xor examples")
{
    const CnfFormula f = test::unconstrained(4);
    CHECK(count_with_xor(f, XorHash(4, {XorRow{false, BitVec::from_string("1100")}}), BitVec::from_string("0")) ==
          8);
    CHECK(count_with_xor(f,
                         XorHash(4, {XorRow{false, BitVec::from_string("1000")},
                                     XorRow{true, BitVec::from_string("0110")},
                                     XorRow{false, BitVec::from_string("0001")}}),
                         BitVec::from_string("101")) == 2);
    CHECK(count_with_xor(f, XorHash(4), BitVec(0)) == 16);
    CHECK_THROWS_AS(count_with_xor(f, XorHash(3), BitVec(0)), std::invalid_argument);
    CHECK_THROWS_AS(count_with_xor(f, XorHash(4), BitVec(1)), std::invalid_argument);
}

TEST_CASE("count_with_xor matches a naive cell count")
{
    CounterRng rng(41);
    for (int k = 0; k < 80; ++k) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.uniform(12));
        const CnfFormula f = test::random_kcnf(n, rng.uniform(3 * n), 3, rng.uniform(1u << 20));
        const std::uint32_t m = static_cast<std::uint32_t>(rng.uniform(5));
        const XorHash h = sample_hash(n, m, rng);
        const CellTarget alpha = sample_alpha(m, rng);
        CHECK(count_with_xor(f, h, alpha) == test::brute_count_cell(f, h, alpha));
    }
}

TEST_CASE("property: cell counts sum to the model count")
{
    CounterRng rng(7);
    for (int k = 0; k < 20; ++k) {
        const std::uint32_t n = 4 + static_cast<std::uint32_t>(rng.uniform(9));
        const CnfFormula f = test::random_kcnf(n, n, 3, rng.uniform(1u << 20));
        const std::uint64_t total = exact_count(f);
        for (int j = 0; j < 5; ++j) {
            const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.uniform(4));
            const XorHash h = sample_hash(n, m, rng);
            std::uint64_t sum = 0;
            for (std::uint64_t a = 0; a < (std::uint64_t{1} << m); ++a) sum += count_with_xor(f, h, BitVec::from_uint(a, m));
            CHECK(sum == total);
        }
    }
}

TEST_CASE("property: count is invariant under variable renaming and clause order")
{
    std::mt19937_64 gen(3);
    for (int k = 0; k < 30; ++k) {
        const std::uint32_t n = 3 + static_cast<std::uint32_t>(gen() % 12);
        const CnfFormula f = test::random_kcnf(n, n + gen() % 10, 3, gen());
        std::vector<std::uint32_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), gen);
        const std::uint64_t c = exact_count(f);
        CHECK(exact_count(permute(f, perm)) == c);
        std::vector<Clause> reordered = f.clauses();
        std::reverse(reordered.begin(), reordered.end());
        CHECK(exact_count(CnfFormula(n, reordered)) == c);
    }
}

TEST_CASE("cross-check against bounded_sat on 50 hashed queries")
{
    CounterRng rng(99);
    for (int k = 0; k < 50; ++k) {
        const std::uint32_t n = 6 + static_cast<std::uint32_t>(rng.uniform(7));
        const CnfFormula f = test::random_kcnf(n, n, 3, rng.uniform(1u << 20));
        const std::uint32_t m = static_cast<std::uint32_t>(rng.uniform(4));
        const XorHash h = sample_hash(n, m, rng);
        const CellTarget alpha = sample_alpha(m, rng);
        const XorEncoding enc = encode_constraint(h, alpha, n + 1);
        const auto r = bounded_sat(BoundedQuery{f, enc.clauses, std::size_t{1} << n, std::nullopt});
        REQUIRE(r.complete());
        CHECK(r.models.size() == count_with_xor(f, h, alpha));
    }
}
