// constructions.hpp
// Builders for the example families: oscillating interval unions, odd
// restrictions, thin block schedules, loosened scale/pattern families,
// density-gap witnesses, and the named union examples. Every builder returns
// the family together with a ConstructionLog recording chosen parameters and
// per-condition check results; logs are replayable, not trusted state.

#pragma once

#include "bfree/common.hpp"
#include "bfree/density.hpp"
#include "bfree/family.hpp"
#include "bfree/int_set.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace bfree {

struct ConstructionLog {
    nlohmann::json data = nlohmann::json::object();
};

// ---------------------------------------------------------------------------
// Oscillating interval unions
// ---------------------------------------------------------------------------

struct BesicovitchIntervalsResult {
    FamilySpec family; // interval_union over the chosen T_k
    std::vector<u64> levels;
    std::vector<double> d_hat;   // stabilized interval-density estimates
    std::vector<u64> x0_surrogate;
    ConstructionLog log;
};

// Greedy T_k selection: per-level density targets eps/2^k, estimates from
// erdos_interval_density, and an x0 surrogate (smallest sampled checkpoint X
// with count <= 2*d_hat*x for all sampled x in [X, n_est]) gating the next
// level. The emitted family satisfies sum d_hat <= eps. Throws BudgetError
// naming the level when no T within budget meets its target — interval
// densities decay like a small power of log T, so desk-scale budgets only
// support loose eps.
// Requires 0 < eps < 1/4 and levels >= 1.
BesicovitchIntervalsResult build_besicovitch_intervals(double eps, std::size_t levels, u64 n_est);

// x0 surrogate alone: smallest sampled checkpoint X <= n_est such that
// |M_(T,2T] ∩ [1,x]| <= 2*d_hat*x for every sampled x in [X, n_est].
std::optional<u64> interval_x0_surrogate(u64 t, double d_hat, u64 n_est,
                                         std::size_t samples = 48);

FamilySpec build_odd_variant(FamilySpec inner);

// ---------------------------------------------------------------------------
// Thin blocks
// ---------------------------------------------------------------------------

struct ThinBlocksPolicy {
    std::size_t levels = 4;
    double beta_target = 0.5;  // require sum len_i/t_i <= 1 - beta_target
    u64 first_t = 8;
    u64 first_len = 2;
    u64 lcm_align_cap = u64(1) << 24; // exact-alignment mode while lcm fits (and blocks stay sievable)
    u64 margin_factor = 64;           // unaligned mode: len >= margin_factor * |E so far|
    u64 max_t = u64(1) << 40;         // schedule overflow guard
};

struct ThinBlocksResult {
    FamilySpec family; // thin_blocks
    std::vector<FiniteSet> per_level;
    FiniteSet scale_set; // union of the levels
    Rat ratio_sum;       // sum len_i/t_i, exact
    Rat beta;            // 1 - ratio_sum
    ConstructionLog log;
};

// Blocks [t_i, t_i+len_i-1]; level i+1 is the block minus multiples of all
// earlier survivors. While lcm(E_1..E_i) fits lcm_align_cap the next block
// length and start are aligned to it, making |M ∩ block| = len * d(M) exact;
// past the cap the builder switches to wide unaligned blocks and verifies the
// |E_i| >= beta * len_i bound by exact counting (error on violation).
ThinBlocksResult build_thin_blocks(const ThinBlocksPolicy& policy);

// B = union over levels of E_i * A_i with patterns above the given cutoff
// (progression level per thin-blocks level). With cutoff > max(E) the scale
// set is disjoint from M_B on [1, max(E)].
FamilySpec attach_patterns_above(const std::vector<FiniteSet>& per_level, u64 cutoff);

// ---------------------------------------------------------------------------
// Loosening
// ---------------------------------------------------------------------------

struct LooseningPlan {
    std::vector<u64> strides; // per-scale; empty means all 1
    u64 n_cal = 1'000'000;    // calibration budget
    u64 x_start = 16;
    std::size_t samples = 64; // geometric calibration grid size
};

struct LooseningResult {
    FamilySpec family; // loosening
    std::vector<u64> x_hat;   // empirical onset of the per-level g bound
    std::vector<u64> cutoffs; // K_i = max(e_i, ceil(x_hat_i / e_i)) + 1
    ConstructionLog log;
};

// For each scale e_i (level i): calibrates x_hat_i as the first sampled x
// after which g_{i,1/2^i}(x) <= 1/4^(i-1) holds on all sampled x <= n_cal
// (computed against the full progression; cutoffs only shrink g), then fixes
// the cutoff K_i. The emitted family is primitive on truncations; the g bound
// is re-audited on the emitted patterns. Scales must form a primitive set.
LooseningResult build_loosening(const FiniteSet& scales, const LooseningPlan& plan = {});

// ---------------------------------------------------------------------------
// Density-gap witness (non-vanishing difference of sets of multiples)
// ---------------------------------------------------------------------------

struct GapWitnessResult {
    FamilySpec family_b;     // the loosened family
    FamilySpec family_e;     // the base family it loosens
    std::vector<u64> cutoffs;            // K_1 < K_2 < ... (K_{i+1} are witness checkpoints)
    std::vector<u64> witness_checkpoints;
    double eps0 = 0.0;                   // min over levels of the observed gap
    ConstructionLog log;
};

// For a base family E whose truncation densities oscillate: picks cutoffs
// K_{i+1} where |M_E \ M_{E ∩ [1,K_i)}| / x stays >= eps0/2, and attaches
// progression patterns above each K_i. Then M_B ∩ [1, K_{i+1}) lies inside
// M_{E_i}, so the recorded gap transfers to count_difference(E, B, .).
GapWitnessResult build_density_gap_witness(const FamilySpec& base, std::size_t levels,
                                           u64 n_budget, std::size_t samples = 48);

// ---------------------------------------------------------------------------
// Named union examples
// ---------------------------------------------------------------------------

struct UnionExampleParams {
    std::vector<u64> interval_levels = {8, 320, 12'800, 512'000};
    std::size_t loosening_scales = 6; // ex_110: odd elements receiving patterns
    u64 n_cal = 1'000'000;
    std::size_t split_families = 3; // ex_000: number of disjoint prime families
};

struct UnionExampleResult {
    std::string name;
    FamilySpec family;
    std::map<std::string, FamilySpec> standins; // "tautified", "minimised" desk stand-ins
    ConstructionLog log;
};

// name in {ex_4_1, EX1, EX2, ex_110, ex_000}. Emits the named union with its
// finitely checkable side conditions validated (primitivity, oddness,
// disjointness); stand-ins approximate the taut/minimal counterparts at desk
// scale, with caveats recorded in the log.
UnionExampleResult build_union_example(const std::string& name,
                                       const UnionExampleParams& params = {});

} // namespace bfree
