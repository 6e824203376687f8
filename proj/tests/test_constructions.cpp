#include <doctest.h>

#include "bfree/constructions.hpp"
#include "bfree/criterion.hpp"
#include "bfree/sieve.hpp"
#include "bfree/structure.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace bfree;

TEST_SUITE_BEGIN("constructions");

TEST_CASE("besicovitch interval builder rejects bad parameters") {
    CHECK_THROWS_AS(build_besicovitch_intervals(0.0, 1, 1000), std::invalid_argument);
    CHECK_THROWS_AS(build_besicovitch_intervals(0.25, 1, 1000), std::invalid_argument);
    CHECK_THROWS_AS(build_besicovitch_intervals(0.1, 0, 1000), std::invalid_argument);
}

TEST_CASE("besicovitch interval builder: desk-scale budgets cannot reach eps < 1/4") {
    // Interval densities stay above ~0.3 for every T a 1e6 budget can even
    // estimate, so the per-level target eps/2 = 0.05 is out of reach and the
    // builder must say so, naming the level.
    try {
        build_besicovitch_intervals(0.1, 3, 1'000'000);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()).find("level 1") != std::string::npos);
    }
}

TEST_CASE("interval x0 surrogate validates by recount") {
    const u64 t = 40;
    const u64 n_est = 400'000;
    ErdosIntervalOptions opts;
    opts.n_budget = n_est;
    auto d = erdos_interval_density(t, opts);
    auto x0 = interval_x0_surrogate(t, d.estimate.value, n_est);
    REQUIRE(x0.has_value());
    // replay the defining property on a fresh grid of checkpoints
    FamilySpec iv = FamilySpec::interval_union({t});
    for (u64 x = *x0; x <= n_est; x = x * 3 / 2 + 1) {
        double frac = static_cast<double>(count_multiples(iv, x)) / static_cast<double>(x);
        CHECK(frac <= 2.0 * d.estimate.value + 1e-12);
    }
    // an absurd target has no surrogate
    CHECK_FALSE(interval_x0_surrogate(t, 0.01, n_est).has_value());
}

TEST_CASE("build_odd_variant drops even elements") {
    FamilySpec odd = build_odd_variant(FamilySpec::interval_union({4}));
    CHECK(odd.materialize(100).elems() == std::vector<u64>{5, 7});
    FamilySpec odd2 = build_odd_variant(FamilySpec::explicit_set({2, 3, 5}));
    CHECK(odd2.materialize(10).elems() == std::vector<u64>{3, 5});
}

TEST_CASE("thin blocks: default policy meets every exact condition") {
    ThinBlocksPolicy policy; // 4 levels, ratio budget 0.5
    ThinBlocksResult r = build_thin_blocks(policy);
    REQUIRE(r.per_level.size() == 4);
    CHECK(r.ratio_sum <= Rat(1, 2));
    CHECK(r.beta >= Rat(1, 2));
    const auto* tb = r.family.get_if<ThinBlocks>();
    REQUIRE(tb != nullptr);
    // |E_i| >= beta * len_i, exactly
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(Rat(r.per_level[i].size(), tb->schedule[i].len) >= r.beta);
    // emitted scale set is primitive
    CHECK(is_primitive(r.scale_set));
    // later levels avoid multiples of earlier survivors
    for (std::size_t i = 1; i < 4; ++i) {
        std::vector<u64> earlier;
        for (std::size_t j = 0; j < i; ++j)
            for (u64 e : r.per_level[j]) earlier.push_back(e);
        for (u64 e : r.per_level[i]) CHECK_FALSE(oracle::brute_is_member(earlier, e));
    }
    // the declarative schedule replays to the same truncations
    u64 mx = r.scale_set.max();
    CHECK(r.family.materialize(mx) == r.scale_set);
    CHECK(r.family.materialize(mx / 2).size() < r.scale_set.size());
}

TEST_CASE("thin blocks: first level uses exact alignment, ratio allocation halves") {
    ThinBlocksPolicy policy;
    ThinBlocksResult r = build_thin_blocks(policy);
    const auto* tb = r.family.get_if<ThinBlocks>();
    // level 2 must be aligned to lcm(E_1) = lcm(8,9) = 72
    CHECK(tb->schedule[1].len % 72 == 0);
    CHECK(tb->schedule[1].t % 72 == 0);
    // block ratios never exceed the halved allocations
    CHECK(Rat(tb->schedule[0].len, tb->schedule[0].t) <= Rat(1, 4));
    CHECK(Rat(tb->schedule[1].len, tb->schedule[1].t) <= Rat(1, 8));
}

TEST_CASE("thin blocks with patterns above the last block") {
    ThinBlocksPolicy policy;
    policy.levels = 3;
    ThinBlocksResult r = build_thin_blocks(policy);
    u64 top = r.scale_set.max();
    FamilySpec b = attach_patterns_above(r.per_level, top + 1);
    // the scale set is untouched by the loosened family's multiples
    CHECK(count_multiples(b, top) == 0);
    // so every scale element below a block end is in the difference set
    const auto* tb = r.family.get_if<ThinBlocks>();
    u64 running = 0;
    for (std::size_t i = 0; i < tb->schedule.size(); ++i) {
        running += r.per_level[i].size();
        u64 end = tb->schedule[i].t + tb->schedule[i].len - 1;
        CHECK(count_difference(r.family, b, end) >= running);
    }
}

TEST_CASE("thin blocks policy validation") {
    ThinBlocksPolicy p;
    p.levels = 1;
    CHECK_THROWS_AS(build_thin_blocks(p), std::invalid_argument);
    ThinBlocksPolicy q;
    q.first_len = 8;
    q.first_t = 8;
    CHECK_THROWS_AS(build_thin_blocks(q), std::invalid_argument);
    ThinBlocksPolicy r;
    r.first_len = 4; // ratio 1/2 > budget/2
    CHECK_THROWS_AS(build_thin_blocks(r), std::invalid_argument);
    ThinBlocksPolicy s;
    s.max_t = 1000; // schedule cannot fit
    CHECK_THROWS_AS(build_thin_blocks(s), BudgetError);
}

TEST_CASE("build_loosening on {3, 5}") {
    LooseningPlan plan;
    plan.n_cal = 200'000;
    LooseningResult r = build_loosening(FiniteSet::from_values({3, 5}), plan);
    const auto* l = r.family.get_if<Loosening>();
    REQUIRE(l != nullptr);
    CHECK(l->scales == std::vector<u64>{3, 5});
    REQUIRE(r.cutoffs.size() == 2);
    CHECK(r.cutoffs[0] > 3);
    CHECK(r.cutoffs[1] > 5);
    CHECK(r.cutoffs[0] >= (r.x_hat[0] + 2) / 3);
    // emitted truncation is primitive and the per-level g bound holds on a
    // fresh audit grid
    FiniteSet trunc = r.family.materialize(plan.n_cal);
    CHECK(is_primitive(trunc));
    for (std::size_t i = 0; i < l->scales.size(); ++i) {
        double eps = std::pow(0.5, static_cast<double>(i + 1));
        double bound = std::pow(0.25, static_cast<double>(i));
        for (u64 x = 64; x <= plan.n_cal; x = x * 7 / 2)
            CHECK(g_sum(l->scales[i], l->patterns[i], x, eps) <= bound);
    }
    // levels land in disjoint residue classes: all pairwise distinct elements
    FiniteSet lvl1 = FamilySpec(ScaledProgressionPrimes{l->scales[0], l->patterns[0]})
                         .materialize(plan.n_cal);
    FiniteSet lvl2 = FamilySpec(ScaledProgressionPrimes{l->scales[1], l->patterns[1]})
                         .materialize(plan.n_cal);
    for (u64 v : lvl1) CHECK_FALSE(lvl2.contains(v));
}

TEST_CASE("build_loosening rejects non-primitive scales") {
    CHECK_THROWS_WITH_AS(build_loosening(FiniteSet::from_values({2, 4})),
                         doctest::Contains("witness (2,4)"), std::invalid_argument);
    LooseningPlan bad;
    bad.strides = {1};
    CHECK_THROWS_AS(build_loosening(FiniteSet::from_values({3, 5}), bad), std::invalid_argument);
}

TEST_CASE("density gap witness on an oscillating interval family") {
    FamilySpec base = FamilySpec::interval_union({8, 320, 12'800, 512'000});
    GapWitnessResult r = build_density_gap_witness(base, 3, 2'000'000);
    CHECK(r.eps0 > 0.05);
    REQUIRE(r.witness_checkpoints.size() == 3);
    for (u64 x : r.witness_checkpoints) {
        u64 diff = count_difference(r.family_e, r.family_b, x);
        CHECK(diff > 0);
        CHECK(static_cast<double>(diff) / static_cast<double>(x) >= r.eps0 / 2);
    }
    // cutoffs strictly increase
    for (std::size_t i = 1; i < r.cutoffs.size(); ++i) CHECK(r.cutoffs[i] > r.cutoffs[i - 1]);
}

TEST_CASE("union example: ex_4_1") {
    UnionExampleResult r = build_union_example("ex_4_1");
    CHECK(is_primitive(r.family.materialize(50'000)));
    // the doubled primes inside make the taut-violation evidence fire
    auto v = taut_violation_evidence(r.family, 2, FamilySpec::all_primes(1, 1),
                                     {100, 1000, 10'000}, 0.1);
    CHECK(v.verdict == Verdict::WitnessFound);
    CHECK(r.standins.count("tautified") == 1);
    CHECK(r.standins.count("minimised") == 1);
}

TEST_CASE("union example: EX1 density floor at block tops") {
    UnionExampleParams p;
    UnionExampleResult r = build_union_example("EX1", p);
    // the doubled primes cover every even number except 2 itself, the odd
    // interval part contributes its full half block
    CHECK(count_multiples(FamilySpec::all_primes(2, 1), 100) == 49);
    for (u64 t : p.interval_levels) {
        u64 c = count_multiples(r.family, 2 * t);
        CHECK(c >= t - 1 + t / 2);
        CHECK(4 * (c + 1) >= 3 * (2 * t));
    }
}

TEST_CASE("union example: EX2 primitive core keeps both parts") {
    UnionExampleResult r = build_union_example("EX2");
    FiniteSet trunc = r.family.materialize(10'000);
    FiniteSet core = primitivize(trunc);
    CHECK(is_primitive(core));
    bool has_odd = false, has_even = false;
    for (u64 e : core) (e % 2 ? has_odd : has_even) = true;
    CHECK(has_odd);
    CHECK(has_even);
}

TEST_CASE("union example: ex_110 and ex_000 build with valid logs") {
    UnionExampleParams p;
    p.loosening_scales = 4;
    p.n_cal = 100'000;
    UnionExampleResult a = build_union_example("ex_110", p);
    CHECK(is_primitive(a.family.materialize(50'000)));
    CHECK(a.log.data.contains("loosening"));

    UnionExampleResult b = build_union_example("ex_000", p);
    CHECK(b.log.data["checks"]["split_families_disjoint"] == true);
    // density floor from the odd interval part: at 2T the odd half block is in
    for (u64 t : p.interval_levels) {
        u64 c = count_multiples(b.family, 2 * t);
        CHECK(4 * c >= 2 * t - 4); // ~1/4, exact up to the odd-count floor
    }
    CHECK_THROWS_AS(build_union_example("nope"), std::invalid_argument);
}

TEST_CASE("emitted families round-trip through json") {
    ThinBlocksPolicy policy;
    policy.levels = 3;
    ThinBlocksResult tb = build_thin_blocks(policy);
    FamilySpec back = FamilySpec::from_json(tb.family.to_json());
    CHECK(back == tb.family);
    CHECK(back.materialize(100'000) == tb.family.materialize(100'000));
}

TEST_SUITE_END();
