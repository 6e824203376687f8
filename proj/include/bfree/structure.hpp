// structure.hpp
// Finite-scale structural classification. Asymptotic properties (thin,
// Behrend, taut, minimal, Toeplitz) have no finite decision procedure; every
// verdict here is either witnessed-false, finite evidence, a certified bound,
// or an explicitly declared hypothesis, and reports say which.

#pragma once

#include "bfree/common.hpp"
#include "bfree/density.hpp"
#include "bfree/family.hpp"
#include "bfree/int_set.hpp"

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bfree {

// ---------------------------------------------------------------------------
// Toeplitz period scanning
// ---------------------------------------------------------------------------

struct ToeplitzReport {
    i64 n_lo = 0, n_hi = 0;
    u64 s_max = 0;
    u64 window_n = 0;                 // eta inspected on [-N, N] via symmetry
    std::map<i64, u64> resolved;      // position -> smallest admissible period
    std::vector<i64> defects;         // positions with no admissible s <= s_max
    // Admissibility on a finite window is necessary-condition evidence only.
    bool evidence_only = true;
};

// For each position n in [n_lo, n_hi]: smallest s <= s_max such that
// eta = 1_{F_B} is constant on (n + sZ) ∩ [-N, N], requiring at least
// min_hits progression points inside the window (default 3; fewer is vacuous).
// eta(-m) = eta(m) since M_B = -M_B; eta(0) = 0 for nonempty truncations.
// Requires window_n >= 4 * s_max.
ToeplitzReport toeplitz_scan(const FamilySpec& spec, i64 n_lo, i64 n_hi, u64 s_max,
                             u64 window_n, unsigned min_hits = 3);

std::string toeplitz_report_csv(const ToeplitzReport& r);

// Smallest k in [0, search_radius] such that M_star ∩ [0, n] equals
// (M_host ∩ [k, k+n]) - k bit-for-bit, or nullopt. 0 counts as a multiple.
std::optional<u64> pattern_occurs(const FamilySpec& star, const FamilySpec& host, u64 n,
                                  u64 search_radius);

// ---------------------------------------------------------------------------
// Classification verdicts
// ---------------------------------------------------------------------------

enum class Verdict {
    Certified,            // finite computation proves the property
    HoldsOnTruncation,    // finite evidence only
    WitnessFound,         // property-specific witness located
    Fails,                // disproved on the truncation, witness attached
    NoFiniteCertificate,  // nothing checkable at finite scale
    Declared,             // accepted as a hypothesis, not checked
};

std::string to_string(Verdict v);

struct StructureVerdict {
    std::string property;
    Verdict verdict = Verdict::NoFiniteCertificate;
    std::optional<std::pair<u64, u64>> witness_pair;
    std::optional<u64> witness_value;
    std::string detail;
    nlohmann::json to_json() const;
};

struct ThinCheck {
    StructureVerdict verdict;
    double partial_sum = 0.0;          // sum of 1/b over the truncation
    std::optional<Rat> certified_bound; // exact bound on the full series, when one exists
    u64 truncation_bound = 0;
};

// Partial sum of reciprocals up to K plus, where the variant supports one, a
// certified bound for the whole series (thin_blocks: sum of len_i/t_i over the
// schedule; explicit: the finite sum itself). Prime-pattern families diverge
// for every stride, so they only ever report no-finite-certificate.
ThinCheck thin_check(const FamilySpec& spec, u64 k);

struct BehrendEvidence {
    StructureVerdict verdict;
    DensitySeries series;
    double final_exact_value = 0.0;
};

// Runs the Davenport-Erdos series over k_grid; evidence iff the last exact
// checkpoint is >= 1 - tol. Errors if 1 is an element of the family.
BehrendEvidence behrend_evidence(const FamilySpec& spec, const std::vector<u64>& k_grid,
                                 double tol, const DeSeriesOptions& opts = {});

// Checks c * (witness truncation at K) ⊆ (spec truncation at c*K) exactly,
// then Behrend evidence for the witness family. Both passing yields
// taut-violation evidence (a rescaled Behrend-evidence family inside spec).
StructureVerdict taut_violation_evidence(const FamilySpec& spec, u64 c,
                                         const FamilySpec& witness,
                                         const std::vector<u64>& k_grid, double tol);

// Exact pairwise gcd scan of the truncation at K.
StructureVerdict check_pairwise_coprime(const FamilySpec& spec, u64 k);

// ---------------------------------------------------------------------------
// Structured tautification / minimisation of loosening-form families
// ---------------------------------------------------------------------------

struct CertificateItem {
    std::string hypothesis;
    Verdict status = Verdict::Declared;
    std::string detail;
};

struct StructuredResult {
    FamilySpec scale_set; // the emitted E, explicit
    std::vector<CertificateItem> certificate;
    nlohmann::json to_json() const;
};

struct StructuredOptions {
    u64 truncation_bound = 100'000; // exact checks run on materializations to here
    bool evidence_for_patterns = false; // run Behrend evidence per pattern
    std::vector<u64> evidence_grid = {100, 1000, 10'000};
    double evidence_tol = 0.5;
};

// For a loosening-form family with scale set E: returns E as the taut
// counterpart, with a certificate recording that E is primitive (exact),
// and per-pattern Behrend status (declared for full progression tails,
// finite evidence when requested). Throws if spec is not a loosening or if
// E fails primitivity (witness in the message).
StructuredResult structured_tautification(const FamilySpec& spec,
                                          const StructuredOptions& opts = {});

// Dual: returns E as the minimal counterpart; patterns must be pairwise
// coprime on truncation (exact; error with witness pair otherwise), E
// minimality evidenced by a Toeplitz scan when its lcm is small, declared
// otherwise.
StructuredResult structured_minimisation(const FamilySpec& spec,
                                         const StructuredOptions& opts = {});

} // namespace bfree
