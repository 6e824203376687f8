#include <doctest.h>

#include "bfree/sieve.hpp"
#include "oracles.hpp"

#include <random>
#include <sstream>

using namespace bfree;

TEST_SUITE_BEGIN("sieve");

TEST_CASE("sieve_multiples examples") {
    Window w = sieve_multiples(FiniteSet::from_values({2, 3}), 1, 11);
    CHECK(w.members() == std::vector<u64>{2, 3, 4, 6, 8, 9, 10});
    CHECK(sieve_multiples(FiniteSet{}, 1, 11).members().empty());
    CHECK(sieve_multiples(FiniteSet::from_values({7}), 10, 20).members() == std::vector<u64>{14});
}

TEST_CASE("free_window examples") {
    CHECK(free_window(FiniteSet::from_values({2}), 1, 6).members() == std::vector<u64>{1, 3, 5});
    CHECK(free_window(FiniteSet{}, 1, 4).members() == std::vector<u64>{1, 2, 3});
    CHECK(free_window(FiniteSet::from_values({2, 3}), 1, 13).members() ==
          std::vector<u64>{1, 5, 7, 11});
}

TEST_CASE("window preconditions") {
    CHECK_THROWS_AS(sieve_multiples(FiniteSet{}, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(sieve_multiples(FiniteSet{}, 5, 5), std::invalid_argument);
    CHECK_THROWS_AS(sieve_multiples(FiniteSet{}, 1, (u64(1) << 63) + 1), std::out_of_range);
}

TEST_CASE("count_multiples examples") {
    CHECK(count_multiples(FamilySpec::explicit_set({2}), 10) == 5);
    CHECK(count_multiples(FamilySpec::explicit_set({2, 3}), 12) == 8);
    CHECK(count_multiples(FamilySpec::explicit_set({6, 10, 15}), 30) == 8);
}

TEST_CASE("count_difference examples") {
    CHECK(count_difference(FamilySpec::explicit_set({2}), FamilySpec::explicit_set({4}), 8) == 2);
    CHECK(count_difference(FamilySpec::explicit_set({2}), FamilySpec::explicit_set({2}), 100) == 0);
    CHECK(count_difference(FamilySpec::explicit_set({2, 3}), FamilySpec::explicit_set({2}), 12) == 2);
}

TEST_CASE("complementarity and monotonicity in B") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<u64> es;
        for (int i = 0; i < 6; ++i) es.push_back(1 + rng() % 90);
        FiniteSet b = FiniteSet::from_values(es);
        u64 lo = 1 + rng() % 50, hi = lo + 1 + rng() % 400;
        Window m = sieve_multiples(b, lo, hi);
        Window f = free_window(b, lo, hi);
        for (std::size_t i = 0; i < m.words().size(); ++i)
            CHECK((m.words()[i] & f.words()[i]) == 0);
        Window all = m;
        for (std::size_t i = 0; i < all.words().size(); ++i) all.words()[i] |= f.words()[i];
        Window ones(lo, hi);
        for (u64 v = lo; v < hi; ++v) ones.set(v);
        CHECK(all == ones);
        // B ⊆ B' implies bitwise subset
        std::vector<u64> bigger = es;
        bigger.push_back(1 + rng() % 90);
        Window m2 = sieve_multiples(FiniteSet::from_values(bigger), lo, hi);
        for (std::size_t i = 0; i < m.words().size(); ++i)
            CHECK((m.words()[i] & ~m2.words()[i]) == 0);
    }
}

TEST_CASE("segment independence: split sieving equals whole-window sieving") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<u64> es;
        for (int i = 0; i < 5; ++i) es.push_back(1 + rng() % 60);
        FiniteSet b = FiniteSet::from_values(es);
        u64 lo = 1 + rng() % 100, mid = lo + 1 + rng() % 200, hi = mid + 1 + rng() % 200;
        Window whole = sieve_multiples(b, lo, hi);
        Window left = sieve_multiples(b, lo, mid);
        Window right = sieve_multiples(b, mid, hi);
        for (u64 v = lo; v < mid; ++v) CHECK(whole.get(v) == left.get(v));
        for (u64 v = mid; v < hi; ++v) CHECK(whole.get(v) == right.get(v));
        // odd segment lengths force the unaligned merge path
        Window odd_seg = sieve_multiples(b, lo, hi, 97);
        CHECK(odd_seg == whole);
    }
}

TEST_CASE("brute-force oracle equivalence on random sets") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<u64> es;
        int k = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < k; ++i) es.push_back(1 + rng() % 100);
        u64 n = 1 + rng() % 10'000;
        FiniteSet b = FiniteSet::from_values(es);
        CHECK(count_multiples(b, n) == oracle::brute_count_multiples(es, n));
    }
}

TEST_CASE("count_multiples_at matches individual counts") {
    FiniteSet b = FiniteSet::from_values({3, 5, 14});
    std::vector<u64> cps = {1, 7, 100, 1'000'000, 2'000'001};
    auto counts = count_multiples_at(b, cps);
    for (std::size_t i = 0; i < cps.size(); ++i) CHECK(counts[i] == count_multiples(b, cps[i]));
}

TEST_CASE("window dump and load round-trip") {
    Window w = sieve_multiples(FiniteSet::from_values({2, 7}), 5, 200);
    std::stringstream ss;
    dump_window(w, ss);
    Window r = load_window(ss);
    CHECK(r == w);
    CHECK(r.lo() == 5);
    CHECK(r.hi() == 200);
}

TEST_SUITE_END();
