#include <doctest.h>

#include "bfree/family.hpp"
#include "bfree/primes.hpp"
#include "oracles.hpp"

#include <nlohmann/json.hpp>

#include <random>

using namespace bfree;

TEST_SUITE_BEGIN("family");

TEST_CASE("explicit and interval materialization") {
    FamilySpec e = FamilySpec::explicit_set({2, 3, 50});
    CHECK(e.materialize(10).elems() == std::vector<u64>{2, 3});
    FamilySpec iv = FamilySpec::interval_union({4});
    CHECK(iv.materialize(100).elems() == std::vector<u64>{5, 6, 7, 8});
    CHECK(iv.materialize(6).elems() == std::vector<u64>{5, 6});
    CHECK(iv.materialize(4).empty());
}

TEST_CASE("odd restriction") {
    FamilySpec odd = FamilySpec::odd_restriction(FamilySpec::interval_union({4}));
    CHECK(odd.materialize(100).elems() == std::vector<u64>{5, 7});
    FamilySpec odd2 = FamilySpec::odd_restriction(FamilySpec::explicit_set({2, 3, 5}));
    CHECK(odd2.materialize(100).elems() == std::vector<u64>{3, 5});
}

TEST_CASE("scaled progression primes and loosening") {
    // level 1: primes 3 mod 4; scaled by 3: {9, 21, 33, 57, 69, ...}
    FamilySpec spp(ScaledProgressionPrimes{3, PatternSpec{1, 2, 1}});
    CHECK(spp.materialize(70).elems() == std::vector<u64>{9, 21, 33, 57, 69});
    Loosening l;
    l.scales = {3, 5};
    l.patterns = {PatternSpec{1, 5, 1}, PatternSpec{2, 2, 1}};
    FamilySpec lf(l);
    // 3 * {7, 11, 19, 23, ...} union 5 * {5, 13, 29, ...}
    CHECK(lf.materialize(70).elems() == std::vector<u64>{21, 25, 33, 57, 65, 69});
}

TEST_CASE("prime powers variant") {
    FamilySpec squares = FamilySpec::all_primes(1, 2); // p^2
    CHECK(squares.materialize(50).elems() == std::vector<u64>{4, 9, 25, 49});
    FamilySpec two_p = FamilySpec::all_primes(2, 1); // 2p
    CHECK(two_p.materialize(15).elems() == std::vector<u64>{4, 6, 10, 14});
    FamilySpec odd_sq(PrimePowers{1, 2, 1, 2, 3}); // odd prime squares
    CHECK(odd_sq.materialize(50).elems() == std::vector<u64>{9, 25, 49});
    FamilySpec res(PrimePowers{1, 1, 3, 4, 2}); // primes 3 mod 4
    CHECK(res.materialize(30).elems() == std::vector<u64>{3, 7, 11, 19, 23});
}

TEST_CASE("product variant") {
    FamilySpec prod = FamilySpec::product_of(FamilySpec::explicit_set({2, 3}),
                                             FamilySpec::explicit_set({5, 7}));
    CHECK(prod.materialize(100).elems() == std::vector<u64>{10, 14, 15, 21});
    CHECK(prod.materialize(14).elems() == std::vector<u64>{10, 14});
}

TEST_CASE("thin blocks materialization sieves earlier levels out") {
    ThinBlocks tb;
    tb.schedule = {{10, 2}, {110, 6}};
    FamilySpec f(tb);
    // E1 = {10, 11}; block 2 = [110,115] minus multiples of 10, 11
    CHECK(f.materialize(200).elems() == std::vector<u64>{10, 11, 111, 112, 113, 114, 115});
    CHECK(f.materialize(112).elems() == std::vector<u64>{10, 11, 111, 112});
    ThinBlocks bad;
    bad.schedule = {{10, 5}, {12, 3}};
    CHECK_THROWS_AS(FamilySpec(bad).materialize(100), std::invalid_argument);
}

TEST_CASE("union merges and deduplicates") {
    FamilySpec u = FamilySpec::union_of(
        {FamilySpec::explicit_set({4, 6}), FamilySpec::all_primes(2, 1)});
    CHECK(u.materialize(11).elems() == std::vector<u64>{4, 6, 10});
}

namespace {

FamilySpec random_family(std::mt19937_64& rng, int depth = 0) {
    std::uniform_int_distribution<int> pick(0, depth >= 2 ? 5 : 8);
    switch (pick(rng)) {
        case 0: {
            std::vector<u64> es;
            for (int i = 0; i < 5; ++i) es.push_back(1 + rng() % 400);
            return FamilySpec::explicit_set(es);
        }
        case 1: {
            std::vector<u64> ls = {2 + rng() % 20, 50 + rng() % 100};
            return FamilySpec::interval_union(ls);
        }
        case 2: {
            ThinBlocks tb;
            u64 t1 = 8 + rng() % 8;
            u64 l1 = 1 + rng() % (t1 / 2);
            u64 t2 = t1 * (10 + rng() % 5);
            tb.schedule = {{t1, l1}, {t2, 1 + rng() % (t2 / 4)}};
            return FamilySpec(tb);
        }
        case 3:
            return FamilySpec(ScaledProgressionPrimes{
                1 + rng() % 6, PatternSpec{static_cast<u32>(1 + rng() % 3), 2 + rng() % 30,
                                           1 + rng() % 3}});
        case 4:
            return FamilySpec(PrimePowers{1 + rng() % 4, static_cast<u32>(1 + rng() % 2),
                                          rng() % 2, 2, 2 + rng() % 10});
        case 5: {
            Loosening l;
            l.scales = {2 + rng() % 5, 20 + rng() % 10};
            l.patterns = {PatternSpec{1, 2 + rng() % 10, 1 + rng() % 2},
                          PatternSpec{2, 2 + rng() % 10, 1}};
            return FamilySpec(l);
        }
        case 6:
            return FamilySpec::odd_restriction(random_family(rng, depth + 1));
        case 7:
            return FamilySpec::union_of(
                {random_family(rng, depth + 1), random_family(rng, depth + 1)});
        default:
            return FamilySpec::product_of(FamilySpec::explicit_set({2 + rng() % 4, 7 + rng() % 4}),
                                          random_family(rng, depth + 1));
    }
}

} // namespace

TEST_CASE("materialization is monotone in the bound for every variant") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 60; ++iter) {
        FamilySpec f = random_family(rng);
        u64 n1 = 50 + rng() % 2000;
        u64 n2 = n1 + rng() % 3000;
        FiniteSet a = f.materialize(n1);
        FiniteSet b = f.materialize(n2);
        for (u64 e : a) {
            CHECK(e <= n1);
            CHECK(b.contains(e));
        }
        // and the larger truncation adds nothing below n1
        std::size_t below = 0;
        for (u64 e : b)
            if (e <= n1) ++below;
        CHECK(below == a.size());
    }
}

TEST_CASE("json round-trip reproduces materializations") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 40; ++iter) {
        FamilySpec f = random_family(rng);
        nlohmann::json j = f.to_json();
        FamilySpec g = FamilySpec::from_json(nlohmann::json::parse(j.dump()));
        CHECK(f == g);
        u64 n = 100 + rng() % 2000;
        CHECK(f.materialize(n) == g.materialize(n));
    }
}

TEST_CASE("json rejects malformed input") {
    CHECK_THROWS_AS(FamilySpec::from_json(nlohmann::json::parse("{}")), std::invalid_argument);
    CHECK_THROWS_AS(FamilySpec::from_json(nlohmann::json::parse(R"({"variant":"nope"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(FamilySpec::from_json(nlohmann::json::parse(
                        R"({"variant":"loosening","scales":[2],"patterns":[]})")),
                    std::invalid_argument);
}

TEST_SUITE_END();
