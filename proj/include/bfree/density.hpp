// density.hpp
// Densities of sets of multiples: exact rationals for finite sets (inclusion-
// exclusion over subset lcms, or one full lcm period), empirical natural and
// logarithmic partial densities, the Davenport-Erdos checkpoint series, and
// liminf/limsup proxies over checkpoint grids.

#pragma once

#include "bfree/common.hpp"
#include "bfree/family.hpp"
#include "bfree/int_set.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bfree {

enum class DensityKind { NaturalPartial, LogPartial, ExactPeriodic };

std::string to_string(DensityKind k);

struct DensityEstimate {
    DensityKind kind = DensityKind::NaturalPartial;
    std::optional<Rat> exact;  // present for exact kinds and natural partials
    double value = 0.0;        // unclipped; log partials can exceed 1 at finite n
    std::optional<u64> n;      // evaluation bound; absent for exact-periodic

    // Reported value, clamped into [0, 1].
    double clipped() const { return value < 0 ? 0.0 : (value > 1 ? 1.0 : value); }
};

struct DensitySeries {
    std::vector<u64> checkpoints; // strictly increasing
    std::vector<DensityEstimate> values;
};

inline constexpr std::size_t kSubsetCap = 24;       // inclusion-exclusion: <= 2^24 subsets
inline constexpr u64 kDefaultPeriodCap = 100'000'000; // one-period sieve budget

// |M ∩ [1,n]| / n as an exact rational.
DensityEstimate natural_partial(const FamilySpec& spec, u64 n);
DensityEstimate natural_partial(const FiniteSet& b, u64 n);

// (1 / ln n) * sum_{k <= n, k in M} 1/k, compensated float. n >= 2.
DensityEstimate log_partial(const FamilySpec& spec, u64 n);

// d(M_B) by inclusion-exclusion: sum over nonempty S subseteq B of
// (-1)^(|S|+1) / lcm(S), lcms in big integers. Throws BudgetError when
// |B| > subset_cap; empty B gives exact 0.
Rat exact_density_finite(const FiniteSet& b, std::size_t subset_cap = kSubsetCap);

// d(M_B) by sieving one full period lcm(B). Throws BudgetError when the lcm
// exceeds `period_cap`.
Rat exact_density_period(const FiniteSet& b, u64 period_cap = kDefaultPeriodCap);

// d(M_B) for pairwise coprime B: 1 - prod(1 - 1/b). Throws std::invalid_argument
// if B is not pairwise coprime.
Rat exact_density_coprime(const FiniteSet& b);

struct DeSeriesOptions {
    std::size_t subset_cap = kSubsetCap;
    u64 period_cap = kDefaultPeriodCap;
    u64 fallback_n = 1'000'000; // natural-partial bound when no exact route fits
};

// d(M_{B ∩ [1,K]}) per checkpoint K. Exact (period sieve / inclusion-exclusion
// / coprime product) where budgets allow; otherwise degrades to a natural
// partial at max(fallback_n, 64*K), tagged so. Exact checkpoints are verified
// nondecreasing.
DensitySeries davenport_erdos_series(const FamilySpec& spec, const std::vector<u64>& k_grid,
                                     const DeSeriesOptions& opts = {});

struct OscillationProxies {
    Rat min_value, max_value;
    u64 argmin = 0, argmax = 0;
    std::size_t checkpoints_used = 0;
    double spread() const { return static_cast<double>(max_value - min_value); }
};

// Min and max natural partial over the checkpoints >= burn_in; proxies for
// liminf/limsup. Requires at least two usable checkpoints.
OscillationProxies upper_lower_proxies(const FamilySpec& spec, const std::vector<u64>& checkpoints,
                                       u64 burn_in);

struct ErdosIntervalOptions {
    bool exact = false;            // exact route: IE for T <= subset cap, else period sieve
    std::size_t subset_cap = kSubsetCap;
    u64 period_cap = kDefaultPeriodCap;
    u64 n_budget = 10'000'000;     // empirical route: largest n allowed
    double rel_tol = 1e-3;         // stable when |v(2n)-v(n)| / v(2n) < rel_tol
};

struct ErdosIntervalDensity {
    DensityEstimate estimate;
    bool stabilized = false; // meaningful for the empirical route
    u64 n_used = 0;
};

// d_T = d(M_(T,2T]): exact when requested and within caps, otherwise the
// empirical stabilization rule starting at n = 1000*T. A run that exhausts
// n_budget without stabilizing is returned with stabilized=false.
ErdosIntervalDensity erdos_interval_density(u64 t, const ErdosIntervalOptions& opts = {});

// CSV: columns K,kind,value_num,value_den,value_float (num/den empty for
// non-exact rows).
std::string density_series_csv(const DensitySeries& s);

} // namespace bfree
