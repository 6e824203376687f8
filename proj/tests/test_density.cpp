#include <doctest.h>

#include "bfree/density.hpp"
#include "bfree/sieve.hpp"
#include "oracles.hpp"

#include <random>

using namespace bfree;

TEST_SUITE_BEGIN("density");

TEST_CASE("natural_partial examples") {
    CHECK(*natural_partial(FamilySpec::explicit_set({2}), 10).exact == Rat(1, 2));
    CHECK(*natural_partial(FamilySpec(Explicit{}), 1'000'000).exact == Rat(0));
    CHECK(*natural_partial(FamilySpec::explicit_set({6, 10, 15}), 30).exact == Rat(4, 15));
}

TEST_CASE("natural_partial times n is the count") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<u64> es;
        for (int i = 0; i < 5; ++i) es.push_back(1 + rng() % 80);
        u64 n = 1 + rng() % 5000;
        FamilySpec f = FamilySpec::explicit_set(es);
        auto d = natural_partial(f, n);
        Rat scaled = *d.exact * n;
        CHECK(rat_den(scaled) == 1);
        CHECK(rat_num(scaled) == BigInt(count_multiples(f, n)));
    }
}

TEST_CASE("log_partial examples against the harmonic oracle") {
    CHECK(log_partial(FamilySpec(Explicit{}), 1000).value == 0.0);
    // {1}: every integer is a member; raw value exceeds 1 at finite n
    u64 n = 1'000'000;
    auto d1 = log_partial(FamilySpec::explicit_set({1}), n);
    double expect = oracle::harmonic(n) / std::log(static_cast<double>(n));
    CHECK(d1.value == doctest::Approx(expect).epsilon(1e-10));
    CHECK(d1.value > 1.0);
    CHECK(d1.clipped() == 1.0);
    // {2}: sum over even k of 1/k = H(n/2)/2
    auto d2 = log_partial(FamilySpec::explicit_set({2}), n);
    double expect2 = oracle::harmonic(n / 2) / 2.0 / std::log(static_cast<double>(n));
    CHECK(d2.value == doctest::Approx(expect2).epsilon(1e-10));
    CHECK(std::abs(d2.value - 0.5) < 0.03);
}

TEST_CASE("exact_density_finite examples") {
    CHECK(exact_density_finite(FiniteSet::from_values({2, 3})) == Rat(2, 3));
    CHECK(exact_density_finite(FiniteSet::from_values({2, 4})) == Rat(1, 2));
    CHECK(exact_density_finite(FiniteSet::from_values({6, 10, 15})) == Rat(4, 15));
    CHECK(exact_density_finite(FiniteSet{}) == Rat(0));
    std::vector<u64> big;
    for (u64 v = 100; v < 130; ++v) big.push_back(v);
    CHECK_THROWS_AS(exact_density_finite(FiniteSet::from_values(big)), BudgetError);
}

TEST_CASE("exact_density_period examples") {
    CHECK(exact_density_period(FiniteSet::from_values({2, 3})) == Rat(2, 3));
    CHECK(exact_density_period(FiniteSet::from_values({4, 9, 25})) == Rat(9, 25));
    CHECK_THROWS_AS(exact_density_period(FiniteSet::from_values({7, 11, 13, 17, 19, 23}), 1'000'000),
                    BudgetError);
}

TEST_CASE("inclusion-exclusion equals the period sieve on random sets") {
    std::mt19937_64 rng(23);
    // random divisors of a smooth number keep the lcm under the cap
    const std::vector<u64> primes = {2, 2, 2, 3, 3, 5, 7, 11};
    for (int iter = 0; iter < 60; ++iter) {
        u64 l = 1;
        for (u64 p : primes)
            if (rng() % 2) l *= p;
        if (l == 1) continue;
        std::vector<u64> divs;
        for (u64 d = 1; d * d <= l; ++d) {
            if (l % d == 0) {
                divs.push_back(d);
                divs.push_back(l / d);
            }
        }
        std::vector<u64> pick;
        for (u64 d : divs)
            if (d > 1 && rng() % 3 == 0) pick.push_back(d);
        if (pick.empty()) continue;
        if (pick.size() > 12) pick.resize(12);
        FiniteSet b = FiniteSet::from_values(pick);
        Rat ie = exact_density_finite(b);
        Rat per = exact_density_period(b);
        CHECK(ie == per);
        CHECK(exact_density_finite(primitivize(b)) == ie);
        CHECK(ie >= 0);
        CHECK(ie <= 1);
    }
}

TEST_CASE("inclusion-exclusion big-lcm lane agrees with the 64-bit lane") {
    // force the big lane with large pairwise coprime elements
    std::vector<u64> es = {(u64(1) << 31) - 1, (u64(1) << 31) + 11, (u64(1) << 32) + 15,
                           (u64(1) << 33) + 35};
    FiniteSet b = FiniteSet::from_values(es);
    CHECK(!lcm_capped(b, u64(1) << 62).has_value()); // the 64-bit lane cannot apply
    Rat ie = exact_density_finite(b);
    Rat prod = exact_density_coprime(b);
    CHECK(ie == prod);
}

TEST_CASE("coprime product equals inclusion-exclusion") {
    FiniteSet b = FiniteSet::from_values({4, 9, 25, 49, 121});
    CHECK(exact_density_coprime(b) == exact_density_finite(b));
    CHECK_THROWS_AS(exact_density_coprime(FiniteSet::from_values({4, 6})), std::invalid_argument);
}

TEST_CASE("subadditivity of exact densities") {
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<u64> e1, e2;
        for (int i = 0; i < 4; ++i) e1.push_back(2 + rng() % 30);
        for (int i = 0; i < 4; ++i) e2.push_back(2 + rng() % 30);
        FiniteSet b1 = FiniteSet::from_values(e1);
        FiniteSet b2 = FiniteSet::from_values(e2);
        std::vector<u64> both = e1;
        both.insert(both.end(), e2.begin(), e2.end());
        FiniteSet u = FiniteSet::from_values(both);
        CHECK(exact_density_finite(u) <= exact_density_finite(b1) + exact_density_finite(b2));
    }
}

TEST_CASE("finite-n partial densities converge with the |B|/n bound") {
    std::mt19937_64 rng(41);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<u64> es;
        for (int i = 0; i < 6; ++i) es.push_back(2 + rng() % 50);
        FiniteSet b = FiniteSet::from_values(es);
        u64 n = 2000 + rng() % 8000;
        Rat exact = exact_density_finite(b);
        Rat partial = *natural_partial(FamilySpec(Explicit{b}), n).exact;
        Rat diff = partial > exact ? partial - exact : exact - partial;
        CHECK(diff <= Rat(b.size(), n));
    }
}

TEST_CASE("davenport-erdos series: squares of primes") {
    DensitySeries s = davenport_erdos_series(FamilySpec::all_primes(1, 2), {4, 9, 25});
    REQUIRE(s.values.size() == 3);
    CHECK(*s.values[0].exact == Rat(1, 4));
    CHECK(*s.values[1].exact == Rat(1, 3));
    CHECK(*s.values[2].exact == Rat(9, 25));
    for (const auto& v : s.values) CHECK(v.kind == DensityKind::ExactPeriodic);
}

TEST_CASE("davenport-erdos series: constant for {2}, monotone for primes 3 mod 4") {
    DensitySeries c = davenport_erdos_series(FamilySpec::explicit_set({2}), {10, 100, 1000});
    for (const auto& v : c.values) CHECK(*v.exact == Rat(1, 2));

    // Primes 3 mod 4: truncations are pairwise coprime, so checkpoints are
    // exact via the product route. Values rise toward 1 but stay below it;
    // the K = 1e4 checkpoint is ~0.7137 (computed, not assumed).
    FamilySpec p34(PrimePowers{1, 1, 3, 4, 2});
    DensitySeries s = davenport_erdos_series(p34, {100, 1000, 10'000});
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        CHECK(s.values[i].kind == DensityKind::ExactPeriodic);
        CHECK(*s.values[i].exact < 1);
        if (i > 0) CHECK(*s.values[i].exact >= *s.values[i - 1].exact);
        // cross-check against the independent coprime-product oracle
        CHECK(*s.values[i].exact == exact_density_coprime(p34.materialize(s.checkpoints[i])));
    }
    CHECK(s.values.back().value == doctest::Approx(0.713673).epsilon(1e-4));
}

TEST_CASE("davenport-erdos series degrades to a tagged natural partial") {
    // 30 consecutive integers: too many for inclusion-exclusion, lcm too big
    // for a period sieve, not pairwise coprime
    FamilySpec iv = FamilySpec::interval_union({30});
    DeSeriesOptions opts;
    opts.fallback_n = 100'000;
    DensitySeries s = davenport_erdos_series(iv, {60}, opts);
    CHECK(s.values[0].kind == DensityKind::NaturalPartial);
    CHECK(s.values[0].n.has_value());
}

TEST_CASE("upper_lower_proxies") {
    auto p = upper_lower_proxies(FamilySpec::explicit_set({2}), {10, 100, 1000}, 0);
    CHECK(p.min_value == Rat(1, 2));
    CHECK(p.max_value == Rat(1, 2));
    auto z = upper_lower_proxies(FamilySpec(Explicit{}), {10, 100}, 0);
    CHECK(z.min_value == Rat(0));
    CHECK(z.max_value == Rat(0));
    CHECK_THROWS_AS(upper_lower_proxies(FamilySpec::explicit_set({2}), {10}, 0),
                    std::invalid_argument);

    // interval family: full blocks push partials to 1/2 and beyond at 2T,
    // decay pulls them down between blocks
    FamilySpec iv = FamilySpec::interval_union({4, 400, 40'000});
    auto o = upper_lower_proxies(iv, {8, 800, 4000, 40'000, 80'000}, 0);
    CHECK(o.max_value >= Rat(1, 2));
    CHECK(o.min_value < o.max_value);
}

TEST_CASE("erdos_interval_density exact values") {
    ErdosIntervalOptions exact;
    exact.exact = true;
    CHECK(*erdos_interval_density(1, exact).estimate.exact == Rat(1, 2));
    CHECK(*erdos_interval_density(2, exact).estimate.exact == Rat(1, 2));
    CHECK(*erdos_interval_density(3, exact).estimate.exact == Rat(7, 15));
}

TEST_CASE("erdos_interval_density empirical stabilization") {
    ErdosIntervalOptions opts;
    opts.n_budget = 4'000'000;
    auto d = erdos_interval_density(3, opts);
    CHECK(d.n_used >= 3000);
    CHECK(d.estimate.value == doctest::Approx(7.0 / 15.0).epsilon(0.01));
    // tiny budget: starting point unreachable
    ErdosIntervalOptions small;
    small.n_budget = 100;
    CHECK_THROWS_AS(erdos_interval_density(3, small), BudgetError);
}

TEST_CASE("density series csv shape") {
    DensitySeries s = davenport_erdos_series(FamilySpec::all_primes(1, 2), {4, 9});
    std::string csv = density_series_csv(s);
    CHECK(csv.find("K,kind,value_num,value_den,value_float") == 0);
    CHECK(csv.find("4,exact-periodic,1,4,") != std::string::npos);
    CHECK(csv.find("9,exact-periodic,1,3,") != std::string::npos);
}

TEST_SUITE_END();
