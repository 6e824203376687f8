// criterion.hpp
// The existence-criterion statistic S(x, eps) for sets of multiples, prime-
// reciprocal g-sums over scaled progression windows, and Mertens-style partial
// sums over primes in arithmetic progressions.
//
// Power boundaries a > x^(1-eps) are decided once per evaluation by
// pow_boundary_first_above: a floating estimate refined by a +-2 integer
// neighborhood scan against a long-double log comparison (relative tolerance
// 1e-15 treats a == x^(1-eps) as boundary equality, which is excluded by the
// strict inequality). Deterministic for a fixed platform.

#pragma once

#include "bfree/common.hpp"
#include "bfree/family.hpp"

#include <string>
#include <vector>

namespace bfree {

// Smallest integer strictly greater than x^q, for q in (0, 1].
u64 pow_boundary_first_above(u64 x, double q);

struct BesicovitchStat {
    u64 x = 0;
    double epsilon = 0.0;
    u64 raw_count = 0; // sum over qualifying a of |[1,x] ∩ aZ ∩ F_{B∩[1,a)}|
    double value = 0.0; // raw_count / x
};

// S(x, eps) = x^-1 * sum_{a in B ∩ (x^(1-eps), x]} |[1,x] ∩ aZ ∩ F_{B∩[1,a)}|,
// via an ascending incremental sieve (total cost O(sum_{b<=x} x/b)).
// Requires x >= 2 and 0 < eps < 1.
BesicovitchStat besicovitch_statistic(const FamilySpec& spec, u64 x, double eps);

struct CriterionVerdict {
    bool consistent = false;   // per-eps limsup proxy at the smallest eps < threshold
    double threshold = 0.05;
    std::string label = "heuristic"; // a double limit; no finite run decides it
};

struct CriterionReport {
    std::vector<u64> x_grid;
    std::vector<double> eps_grid;
    std::vector<std::vector<double>> statistic; // statistic[xi][ei]
    std::vector<double> limsup_proxy;           // per eps: max over the x grid
    CriterionVerdict verdict;
};

CriterionReport criterion_scan(const FamilySpec& spec, const std::vector<u64>& x_grid,
                               const std::vector<double>& eps_grid, double threshold = 0.05);

// g_{i,eps}(x) = sum of 1/p over pattern primes p with scale*p in
// (x^(1-eps), x]; upper boundary is the exact integer test scale*p <= x.
double g_sum(u64 scale, const PatternSpec& pattern, u64 x, double eps);

// sum of 1/p over primes p <= x with p == l (mod k); gcd(k, l) must be 1.
double mertens_progression_sum(u64 k, u64 l, u64 x);

// CSV rows x,eps,S plus a JSON summary string with the verdict.
std::string criterion_report_csv(const CriterionReport& r);
std::string criterion_report_summary_json(const CriterionReport& r);

} // namespace bfree
