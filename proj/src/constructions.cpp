#include "bfree/constructions.hpp"
#include "bfree/criterion.hpp"
#include "bfree/primes.hpp"
#include "bfree/sieve.hpp"
#include "bfree/structure.hpp"

#include <algorithm>
#include <cmath>

namespace bfree {

namespace {

// Ascending deduplicated geometric grid in [lo, hi], endpoints included.
std::vector<u64> geometric_samples(u64 lo, u64 hi, std::size_t count) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("geometric_samples: bad range");
    if (count < 2) count = 2;
    std::vector<u64> out;
    double llo = std::log(static_cast<double>(lo));
    double lhi = std::log(static_cast<double>(hi));
    for (std::size_t i = 0; i < count; ++i) {
        double f = llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(static_cast<u64>(std::llround(std::exp(f))));
    }
    out.front() = lo;
    out.back() = hi;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FiniteSet interval_set(u64 t) {
    std::vector<u64> es;
    for (u64 v = t + 1; v <= 2 * t; ++v) es.push_back(v);
    return FiniteSet::from_sorted(std::move(es));
}

} // namespace

// ---------------------------------------------------------------------------
// Oscillating interval unions
// ---------------------------------------------------------------------------

std::optional<u64> interval_x0_surrogate(u64 t, double d_hat, u64 n_est, std::size_t samples) {
    if (2 * t >= n_est) return std::nullopt;
    FiniteSet b = interval_set(t);
    std::vector<u64> grid = geometric_samples(2 * t, n_est, samples);
    std::vector<u64> counts = count_multiples_at(b, grid);
    // smallest sample index from which every later sample satisfies the bound
    std::size_t first_ok = grid.size();
    for (std::size_t i = grid.size(); i-- > 0;) {
        double bound = 2.0 * d_hat * static_cast<double>(grid[i]);
        if (static_cast<double>(counts[i]) <= bound)
            first_ok = i;
        else
            break;
    }
    if (first_ok == grid.size()) return std::nullopt;
    return grid[first_ok];
}

BesicovitchIntervalsResult build_besicovitch_intervals(double eps, std::size_t levels, u64 n_est) {
    if (!(eps > 0.0) || eps >= 0.25)
        throw std::invalid_argument("build_besicovitch_intervals: need 0 < eps < 1/4");
    if (levels < 1) throw std::invalid_argument("build_besicovitch_intervals: need levels >= 1");
    BesicovitchIntervalsResult out;
    out.log.data["eps"] = eps;
    out.log.data["n_est"] = n_est;
    nlohmann::json level_log = nlohmann::json::array();
    u64 t_floor = 2; // next level must exceed the previous x0 surrogate
    double d_sum = 0.0;
    for (std::size_t k = 1; k <= levels; ++k) {
        const double target = eps / std::pow(2.0, static_cast<double>(k));
        nlohmann::json attempts = nlohmann::json::array();
        std::optional<u64> chosen;
        double chosen_d = 0.0;
        for (u64 t = t_floor;; t *= 2) {
            if (checked_mul(t, 1000) > n_est) break; // stabilization cannot even start
            ErdosIntervalOptions opts;
            opts.n_budget = n_est;
            ErdosIntervalDensity d = erdos_interval_density(t, opts);
            attempts.push_back({{"T", t},
                                {"d_hat", d.estimate.value},
                                {"stabilized", d.stabilized},
                                {"n_used", d.n_used}});
            if (d.stabilized && d.estimate.value <= target) {
                chosen = t;
                chosen_d = d.estimate.value;
                break;
            }
        }
        level_log.push_back({{"level", k}, {"target", target}, {"attempts", attempts}});
        if (!chosen) {
            out.log.data["levels"] = level_log;
            throw BudgetError("build_besicovitch_intervals: level " + std::to_string(k) +
                              ": no T within budget reaches the density target " +
                              std::to_string(target) +
                              " (interval densities decay too slowly at this scale)");
        }
        auto x0 = interval_x0_surrogate(*chosen, chosen_d, n_est);
        if (!x0) {
            out.log.data["levels"] = level_log;
            throw BudgetError("build_besicovitch_intervals: level " + std::to_string(k) +
                              ": no x0 surrogate within the n_est budget");
        }
        out.levels.push_back(*chosen);
        out.d_hat.push_back(chosen_d);
        out.x0_surrogate.push_back(*x0);
        d_sum += chosen_d;
        level_log.back()["chosen_T"] = *chosen;
        level_log.back()["d_hat"] = chosen_d;
        level_log.back()["x0_surrogate"] = *x0;
        t_floor = std::max(*x0 + 1, 2 * *chosen);
    }
    out.log.data["levels"] = level_log;
    out.log.data["d_hat_sum"] = d_sum;
    if (d_sum > eps)
        throw std::logic_error("build_besicovitch_intervals: per-level targets exceeded eps");
    out.family = FamilySpec::interval_union(out.levels);
    return out;
}

FamilySpec build_odd_variant(FamilySpec inner) {
    return FamilySpec::odd_restriction(std::move(inner));
}

// ---------------------------------------------------------------------------
// Thin blocks
// ---------------------------------------------------------------------------

ThinBlocksResult build_thin_blocks(const ThinBlocksPolicy& policy) {
    if (policy.levels < 2) throw std::invalid_argument("build_thin_blocks: need levels >= 2");
    if (!(policy.beta_target > 0.0) || policy.beta_target >= 1.0)
        throw std::invalid_argument("build_thin_blocks: beta_target in (0,1)");
    if (policy.first_len < 1 || policy.first_len >= policy.first_t)
        throw std::invalid_argument("build_thin_blocks: need 1 <= first_len < first_t");
    const Rat q = Rat(1) - Rat(policy.beta_target); // ratio budget, exact
    Rat r1(policy.first_len, policy.first_t);
    if (r1 > q / 2)
        throw std::invalid_argument("build_thin_blocks: first block ratio exceeds half the budget");

    ThinBlocksResult out;
    ThinBlocks schedule;
    std::vector<u64> survivors;
    nlohmann::json level_log = nlohmann::json::array();

    auto push_level = [&](u64 t, u64 len, const char* mode) {
        std::vector<u64> kept;
        std::vector<char> hit(static_cast<std::size_t>(len), 0);
        for (u64 e : survivors) {
            u64 first = ((t + e - 1) / e) * e;
            for (u64 m = first; m < t + len; m += e) hit[static_cast<std::size_t>(m - t)] = 1;
        }
        for (u64 j = 0; j < len; ++j)
            if (!hit[static_cast<std::size_t>(j)]) kept.push_back(t + j);
        schedule.schedule.push_back({t, len});
        out.per_level.push_back(FiniteSet::from_sorted(kept));
        survivors.insert(survivors.end(), kept.begin(), kept.end());
        level_log.push_back({{"t", t}, {"len", len}, {"mode", mode}, {"survivors", kept.size()}});
    };

    push_level(policy.first_t, policy.first_len, "full-block");
    Rat remaining = q - r1;
    for (std::size_t i = 2; i <= policy.levels; ++i) {
        Rat r = remaining / 2;
        remaining -= r;
        const auto& prev = schedule.schedule.back();
        u64 prev_end = prev.t + prev.len - 1;
        FiniteSet surv = FiniteSet::from_sorted(survivors);
        auto lcm = lcm_capped(surv, policy.lcm_align_cap);
        u64 len, t;
        const char* mode;
        // ceil(len / r) as integers
        auto t_for = [&](u64 length) {
            BigInt need = (BigInt(length) * rat_den(r) + rat_num(r) - 1) / rat_num(r);
            if (need > BigInt(policy.max_t))
                throw BudgetError("build_thin_blocks: schedule overflow at level " +
                                  std::to_string(i));
            return static_cast<u64>(need);
        };
        if (lcm) {
            // One full period: |M ∩ block| = len * d(M) exactly.
            len = *lcm;
            u64 t_min = std::max(prev_end + 1, t_for(len));
            t = ((t_min + len - 1) / len) * len;
            mode = "aligned";
        } else {
            // Past the alignment cap: block long enough that per-element edge
            // effects (at most |survivors| positions) stay within the margin.
            len = std::max(checked_mul(policy.margin_factor, survivors.size()),
                           checked_mul(2, prev.len));
            t = std::max(prev_end + 1, t_for(len));
            mode = "unaligned";
        }
        if (t > policy.max_t)
            throw BudgetError("build_thin_blocks: schedule overflow at level " + std::to_string(i));
        push_level(t, len, mode);
    }

    out.ratio_sum = 0;
    for (const auto& blk : schedule.schedule) out.ratio_sum += Rat(blk.len, blk.t);
    out.beta = Rat(1) - out.ratio_sum;
    if (out.ratio_sum >= 1) throw std::logic_error("build_thin_blocks: ratio sum reached 1");
    for (std::size_t i = 0; i < schedule.schedule.size(); ++i) {
        Rat frac(out.per_level[i].size(), schedule.schedule[i].len);
        level_log[i]["survivor_fraction_num"] = out.per_level[i].size();
        bool ok = frac >= out.beta;
        level_log[i]["meets_beta"] = ok;
        if (!ok) {
            std::string msg = "build_thin_blocks: level " + std::to_string(i + 1) +
                              " kept fewer than beta * len survivors";
            if (std::string(level_log[i]["mode"]) == "aligned")
                throw std::logic_error(msg); // exact alignment makes this impossible
            throw BudgetError(msg + "; widen margin_factor");
        }
    }
    out.scale_set = FiniteSet::from_sorted(survivors);
    if (auto w = divisibility_witness(out.scale_set))
        throw std::logic_error("build_thin_blocks: emitted set not primitive, witness (" +
                               std::to_string(w->divisor) + "," + std::to_string(w->multiple) + ")");
    out.family = FamilySpec(schedule);
    // The declarative schedule must replay to the same sets.
    u64 max_end = schedule.schedule.back().t + schedule.schedule.back().len - 1;
    if (!(out.family.materialize(max_end) == out.scale_set))
        throw std::logic_error("build_thin_blocks: schedule replay mismatch");
    out.log.data["levels"] = level_log;
    out.log.data["ratio_sum_num"] = rat_num(out.ratio_sum).str();
    out.log.data["ratio_sum_den"] = rat_den(out.ratio_sum).str();
    out.log.data["beta"] = static_cast<double>(out.beta);
    return out;
}

FamilySpec attach_patterns_above(const std::vector<FiniteSet>& per_level, u64 cutoff) {
    std::vector<FamilySpec> parts;
    for (std::size_t i = 0; i < per_level.size(); ++i) {
        PatternSpec pat;
        pat.level = static_cast<u32>(i + 1);
        pat.cutoff = cutoff;
        parts.push_back(FamilySpec::product_of(FamilySpec(Explicit{per_level[i]}),
                                               FamilySpec(ScaledProgressionPrimes{1, pat})));
    }
    return FamilySpec::union_of(std::move(parts));
}

// ---------------------------------------------------------------------------
// Loosening
// ---------------------------------------------------------------------------

LooseningResult build_loosening(const FiniteSet& scales, const LooseningPlan& plan) {
    if (scales.empty()) throw std::invalid_argument("build_loosening: empty scale set");
    if (auto w = divisibility_witness(scales))
        throw std::invalid_argument("build_loosening: scale set not primitive, witness (" +
                                    std::to_string(w->divisor) + "," +
                                    std::to_string(w->multiple) + ")");
    if (!plan.strides.empty() && plan.strides.size() != scales.size())
        throw std::invalid_argument("build_loosening: strides length mismatch");
    LooseningResult out;
    Loosening fam;
    nlohmann::json level_log = nlohmann::json::array();
    std::vector<u64> grid = geometric_samples(plan.x_start, plan.n_cal, plan.samples);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const u32 level = static_cast<u32>(i + 1);
        const u64 e = scales.elems()[i];
        const double eps = std::pow(0.5, static_cast<double>(level));
        const double bound = std::pow(0.25, static_cast<double>(level) - 1.0);
        PatternSpec full;
        full.level = level;
        full.cutoff = 2;
        // first sampled x after which the g bound holds on every later sample
        std::size_t first_ok = grid.size();
        std::vector<double> gvals(grid.size());
        for (std::size_t gi = grid.size(); gi-- > 0;) {
            gvals[gi] = g_sum(e, full, grid[gi], eps);
            if (gvals[gi] <= bound)
                first_ok = gi;
            else
                break;
        }
        if (first_ok == grid.size())
            throw BudgetError("build_loosening: level " + std::to_string(level) +
                              ": calibration budget exhausted before the g bound held");
        u64 x_hat = grid[first_ok];
        u64 cutoff = std::max(e, (x_hat + e - 1) / e) + 1;
        PatternSpec pat;
        pat.level = level;
        pat.cutoff = cutoff;
        pat.stride = plan.strides.empty() ? 1 : plan.strides[i];
        fam.scales.push_back(e);
        fam.patterns.push_back(pat);
        out.x_hat.push_back(x_hat);
        out.cutoffs.push_back(cutoff);
        level_log.push_back({{"level", level},
                             {"scale", e},
                             {"eps", eps},
                             {"bound", bound},
                             {"x_hat", x_hat},
                             {"cutoff", cutoff},
                             {"stride", pat.stride}});
    }
    out.family = FamilySpec(fam);
    // Audit the bound on the emitted patterns: cutoffs empty the g range below
    // x_hat, so it must hold at every sample.
    nlohmann::json audit = nlohmann::json::array();
    for (std::size_t i = 0; i < fam.scales.size(); ++i) {
        const double eps = std::pow(0.5, static_cast<double>(i + 1));
        const double bound = std::pow(0.25, static_cast<double>(i));
        double worst = 0.0;
        for (u64 x : grid) worst = std::max(worst, g_sum(fam.scales[i], fam.patterns[i], x, eps));
        if (worst > bound)
            throw std::logic_error("build_loosening: emitted pattern violates its g bound");
        audit.push_back({{"level", i + 1}, {"worst_g", worst}, {"bound", bound}});
    }
    // Primitivity of the emitted truncation (scales are primitive and every
    // pattern prime exceeds every scale).
    FiniteSet trunc = out.family.materialize(plan.n_cal);
    if (auto w = divisibility_witness(trunc))
        throw std::logic_error("build_loosening: emitted truncation not primitive, witness (" +
                               std::to_string(w->divisor) + "," + std::to_string(w->multiple) + ")");
    out.log.data["levels"] = level_log;
    out.log.data["g_audit"] = audit;
    out.log.data["truncation_checked"] = plan.n_cal;
    out.log.data["truncation_size"] = trunc.size();
    return out;
}

// ---------------------------------------------------------------------------
// Density-gap witness
// ---------------------------------------------------------------------------

GapWitnessResult build_density_gap_witness(const FamilySpec& base, std::size_t levels,
                                           u64 n_budget, std::size_t samples) {
    if (levels < 1) throw std::invalid_argument("build_density_gap_witness: need levels >= 1");
    GapWitnessResult out;
    out.family_e = base;
    nlohmann::json level_log = nlohmann::json::array();
    std::vector<u64> grid = geometric_samples(4, n_budget, samples);
    u64 k = 2; // first truncation cutoff
    out.cutoffs.push_back(k);
    std::vector<std::pair<FiniteSet, u64>> level_sets; // (E_i, K_i)
    for (std::size_t i = 1; i <= levels; ++i) {
        FiniteSet trunc = base.materialize(k > 0 ? k - 1 : 0); // E ∩ [1, K_i)
        FamilySpec trunc_spec(Explicit{trunc});
        double best = 0.0;
        u64 best_x = 0;
        std::vector<std::pair<u64, double>> gaps;
        for (u64 x : grid) {
            if (x <= k) continue;
            u64 diff = count_difference(base, trunc_spec, x);
            double frac = static_cast<double>(diff) / static_cast<double>(x);
            gaps.push_back({x, frac});
            if (frac > best) {
                best = frac;
                best_x = x;
            }
        }
        if (best <= 0.0)
            throw BudgetError("build_density_gap_witness: level " + std::to_string(i) +
                              ": no positive gap within budget (base family may not oscillate)");
        // Next cutoff: first sampled x where the gap is at least 0.6 of its
        // peak. The replay check asserts the weaker eps0/2 bound, so boundary
        // elements of the loosened family cannot tip it.
        u64 next_k = best_x;
        for (const auto& [x, frac] : gaps) {
            if (frac >= 0.6 * best) {
                next_k = x;
                break;
            }
        }
        if (next_k <= k)
            throw BudgetError("build_density_gap_witness: level " + std::to_string(i) +
                              ": cutoffs stopped increasing");
        level_sets.push_back({trunc, k});
        level_log.push_back({{"level", i},
                             {"K", k},
                             {"gap_peak", best},
                             {"gap_peak_x", best_x},
                             {"next_cutoff", next_k}});
        out.eps0 = (i == 1) ? best : std::min(out.eps0, best);
        out.cutoffs.push_back(next_k);
        out.witness_checkpoints.push_back(next_k);
        k = next_k;
    }
    // B = union of E_i x A_i with A_i the level-i progression tail above K_i.
    std::vector<FamilySpec> parts;
    for (std::size_t i = 0; i < level_sets.size(); ++i) {
        PatternSpec pat;
        pat.level = static_cast<u32>(i + 1);
        pat.cutoff = std::max<u64>(level_sets[i].second, 3);
        parts.push_back(FamilySpec::product_of(FamilySpec(Explicit{level_sets[i].first}),
                                               FamilySpec(ScaledProgressionPrimes{1, pat})));
    }
    out.family_b = FamilySpec::union_of(std::move(parts));
    // Replay: the recorded gap must transfer to count_difference against B.
    nlohmann::json replay = nlohmann::json::array();
    for (u64 x : out.witness_checkpoints) {
        u64 diff = count_difference(base, out.family_b, x);
        double frac = static_cast<double>(diff) / static_cast<double>(x);
        replay.push_back({{"x", x}, {"gap", frac}, {"eps0_half", out.eps0 / 2}});
        if (frac < out.eps0 / 2)
            throw std::logic_error("build_density_gap_witness: replay gap fell below eps0/2");
    }
    out.log.data["levels"] = level_log;
    out.log.data["eps0"] = out.eps0;
    out.log.data["replay"] = replay;
    out.log.data["note"] =
        "with full progression tails as patterns the loosened family's taut counterpart "
        "is the base family";
    return out;
}

// ---------------------------------------------------------------------------
// Named union examples
// ---------------------------------------------------------------------------

namespace {

FamilySpec odd_interval_part(const UnionExampleParams& p) {
    return FamilySpec::odd_restriction(FamilySpec::interval_union(p.interval_levels));
}

FiniteSet loosening_scales_from_odd(const FamilySpec& odd_part, std::size_t m) {
    u64 bound = 64;
    FiniteSet trunc;
    while (true) {
        trunc = primitivize(odd_part.materialize(bound));
        if (trunc.size() >= m || bound > (u64(1) << 40)) break;
        bound *= 4;
    }
    if (trunc.size() < m)
        throw std::invalid_argument("union example: not enough odd elements for the loosening");
    std::vector<u64> first(trunc.begin(), trunc.begin() + static_cast<std::ptrdiff_t>(m));
    return FiniteSet::from_sorted(std::move(first));
}

} // namespace

UnionExampleResult build_union_example(const std::string& name, const UnionExampleParams& params) {
    UnionExampleResult out;
    out.name = name;
    out.log.data["name"] = name;
    out.log.data["interval_levels"] = params.interval_levels;
    const FamilySpec odd_part = odd_interval_part(params);
    const FamilySpec two_primes = FamilySpec::all_primes(2, 1);       // 2p
    const FamilySpec two_prime_squares = FamilySpec::all_primes(2, 2); // 2p^2

    if (name == "ex_4_1") {
        // Erdos-type odd part (odd prime squares) plus doubled primes.
        FamilySpec odd_squares(PrimePowers{1, 2, 1, 2, 3});
        out.family = FamilySpec::union_of({odd_squares, two_primes});
        out.standins["tautified"] =
            FamilySpec::union_of({odd_squares, FamilySpec::explicit_set({2})});
        out.standins["minimised"] = FamilySpec::explicit_set({1});
        out.log.data["caveats"] = nlohmann::json::array();
    } else if (name == "EX1") {
        out.family = FamilySpec::union_of({two_primes, odd_part});
        out.standins["tautified"] =
            FamilySpec::union_of({FamilySpec::explicit_set({2}), odd_part});
        out.standins["minimised"] = FamilySpec::explicit_set({1});
        out.log.data["caveats"] = {"the odd interval part stands in for its taut counterpart, "
                                   "which has no finite description; its multiples contain the "
                                   "stand-in's, so computed lower bounds remain valid"};
    } else if (name == "EX2") {
        out.family = FamilySpec::union_of({odd_part, two_prime_squares});
        out.standins["tautified"] = out.family; // primitive core has the same multiples
        out.standins["minimised"] =
            FamilySpec::union_of({odd_part, FamilySpec::explicit_set({2})});
        out.log.data["caveats"] = {"odd interval part stands in for a minimal odd set"};
    } else if (name == "ex_110") {
        FiniteSet scales = loosening_scales_from_odd(odd_part, params.loosening_scales);
        LooseningPlan plan;
        plan.n_cal = params.n_cal;
        LooseningResult loos = build_loosening(scales, plan);
        out.family = FamilySpec::union_of({loos.family, two_primes});
        out.standins["tautified"] =
            FamilySpec::union_of({loos.family, FamilySpec::explicit_set({2})});
        out.standins["minimised"] =
            FamilySpec::union_of({odd_part, FamilySpec::explicit_set({2})});
        out.log.data["loosening"] = loos.log.data;
        out.log.data["caveats"] = {"loosening scales come from a finite truncation of the odd "
                                   "part; the minimised stand-in keeps the full odd part, since "
                                   "the truncation's own minimisation is just the truncation"};
    } else if (name == "ex_000") {
        // Odd part plus 2 q^2 P_q for the first few primes q, with disjoint
        // progression families P_q.
        std::vector<FamilySpec> parts = {odd_part};
        std::vector<u64> qs;
        for_each_prime(2, 100, [&](u64 p) {
            if (qs.size() < params.split_families) qs.push_back(p);
        });
        nlohmann::json split_log = nlohmann::json::array();
        for (std::size_t j = 0; j < qs.size(); ++j) {
            PatternSpec pat;
            pat.level = static_cast<u32>(j + 1);
            pat.cutoff = 3;
            parts.push_back(FamilySpec::product_of(
                FamilySpec::explicit_set({2 * qs[j] * qs[j]}),
                FamilySpec(ScaledProgressionPrimes{1, pat})));
            split_log.push_back({{"q", qs[j]}, {"progression_level", j + 1}});
        }
        out.family = FamilySpec::union_of(parts);
        out.standins["tautified"] = FamilySpec::union_of({odd_part, two_prime_squares});
        out.standins["minimised"] =
            FamilySpec::union_of({odd_part, FamilySpec::explicit_set({2})});
        out.log.data["split_families"] = split_log;
        out.log.data["caveats"] = {"divergence of the split prime families is declared, "
                                   "not finitely certifiable"};
    } else {
        throw std::invalid_argument("build_union_example: unknown name \"" + name +
                                    "\" (expected ex_4_1, EX1, EX2, ex_110, ex_000)");
    }

    // Finitely checkable side conditions, re-validated against the emitted family.
    const u64 check_bound = 100'000;
    FiniteSet trunc = out.family.materialize(check_bound);
    nlohmann::json checks = nlohmann::json::object();
    if (name == "ex_4_1" || name == "ex_110") {
        auto w = divisibility_witness(trunc);
        checks["primitive_on_truncation"] = !w.has_value();
        if (w) throw std::logic_error("build_union_example: " + name + " truncation not primitive");
    } else {
        FiniteSet core = primitivize(trunc);
        checks["primitive_after_primitivize"] = is_primitive(core);
        checks["primitive_core_size"] = core.size();
    }
    if (name == "ex_000") {
        // Disjointness of the split families, exact on truncations.
        for (std::size_t a = 1; a < params.split_families; ++a) {
            FiniteSet pa = primes_in_progression(static_cast<u32>(a), check_bound);
            for (std::size_t b = a + 1; b <= params.split_families; ++b) {
                FiniteSet pb = primes_in_progression(static_cast<u32>(b), check_bound);
                for (u64 v : pa)
                    if (pb.contains(v))
                        throw std::logic_error("build_union_example: split families intersect");
            }
        }
        checks["split_families_disjoint"] = true;
    }
    checks["truncation_bound"] = check_bound;
    checks["truncation_size"] = trunc.size();
    out.log.data["checks"] = checks;
    return out;
}

} // namespace bfree
