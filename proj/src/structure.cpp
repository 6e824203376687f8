#include "bfree/structure.hpp"
#include "bfree/sieve.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bfree {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::HoldsOnTruncation: return "holds-on-truncation";
        case Verdict::WitnessFound: return "witness-found";
        case Verdict::Fails: return "fails";
        case Verdict::NoFiniteCertificate: return "no-finite-certificate";
        case Verdict::Declared: return "declared";
    }
    return "?";
}

nlohmann::json StructureVerdict::to_json() const {
    nlohmann::json j;
    j["property"] = property;
    j["verdict"] = to_string(verdict);
    if (witness_pair) j["witness_pair"] = {witness_pair->first, witness_pair->second};
    if (witness_value) j["witness_value"] = *witness_value;
    if (!detail.empty()) j["detail"] = detail;
    return j;
}

// ---------------------------------------------------------------------------
// Toeplitz scanning
// ---------------------------------------------------------------------------

namespace {

// eta over [0, N]: eta[m] = 1 iff m is free of the truncated family.
// eta(0) = 0 whenever the truncation is nonempty (0 is a multiple of
// everything); for an empty truncation eta is identically 1.
std::vector<bool> eta_bits(const FamilySpec& spec, u64 window_n) {
    FiniteSet b = spec.materialize(window_n);
    std::vector<bool> eta(static_cast<std::size_t>(window_n) + 1, true);
    if (!b.empty()) {
        eta[0] = false;
        for (u64 e : b)
            for (u64 m = e; m <= window_n; m += e) eta[static_cast<std::size_t>(m)] = false;
    }
    return eta;
}

} // namespace

ToeplitzReport toeplitz_scan(const FamilySpec& spec, i64 n_lo, i64 n_hi, u64 s_max,
                             u64 window_n, unsigned min_hits) {
    if (n_lo > n_hi) throw std::invalid_argument("toeplitz_scan: need n_lo <= n_hi");
    if (s_max < 1) throw std::invalid_argument("toeplitz_scan: need s_max >= 1");
    if (window_n < 4 * s_max)
        throw std::invalid_argument("toeplitz_scan: window too small, need N >= 4*s_max");
    if (min_hits < 2) throw std::invalid_argument("toeplitz_scan: min_hits must be >= 2");
    const i64 N = static_cast<i64>(window_n);
    if (std::max(std::llabs(n_lo), std::llabs(n_hi)) > N)
        throw std::invalid_argument("toeplitz_scan: positions outside [-N, N]");

    auto eta = eta_bits(spec, window_n);
    auto eta_at = [&](i64 m) { return eta[static_cast<std::size_t>(m < 0 ? -m : m)]; };

    ToeplitzReport r;
    r.n_lo = n_lo;
    r.n_hi = n_hi;
    r.s_max = s_max;
    r.window_n = window_n;
    for (i64 n = n_lo; n <= n_hi; ++n) {
        bool found = false;
        for (u64 s = 1; s <= s_max && !found; ++s) {
            const i64 step = static_cast<i64>(s);
            // k range with -N <= n + k*s <= N
            i64 k_min = -((N + n) / step);
            i64 k_max = (N - n) / step;
            if (k_max - k_min + 1 < static_cast<i64>(min_hits)) continue;
            bool first = eta_at(n + k_min * step);
            bool constant = true;
            for (i64 k = k_min + 1; k <= k_max; ++k) {
                if (eta_at(n + k * step) != first) {
                    constant = false;
                    break;
                }
            }
            if (constant) {
                r.resolved[n] = s;
                found = true;
            }
        }
        if (!found) r.defects.push_back(n);
    }
    return r;
}

std::string toeplitz_report_csv(const ToeplitzReport& r) {
    std::ostringstream os;
    os << "n,s\n";
    for (i64 n = r.n_lo; n <= r.n_hi; ++n) {
        auto it = r.resolved.find(n);
        if (it != r.resolved.end())
            os << n << ',' << it->second << '\n';
        else
            os << n << ",defect\n";
    }
    return os.str();
}

std::optional<u64> pattern_occurs(const FamilySpec& star, const FamilySpec& host, u64 n,
                                  u64 search_radius) {
    if (search_radius < n)
        throw std::invalid_argument("pattern_occurs: search_radius must be >= n");
    const u64 host_hi = checked_add(search_radius, n);
    FiniteSet star_set = star.materialize(n);
    FiniteSet host_set = host.materialize(host_hi);

    auto member_bits = [](const FiniteSet& b, u64 hi) {
        std::vector<bool> bits(static_cast<std::size_t>(hi) + 1, false);
        if (!b.empty()) {
            bits[0] = true; // 0 is a multiple of everything
            for (u64 e : b)
                for (u64 m = e; m <= hi; m += e) bits[static_cast<std::size_t>(m)] = true;
        }
        return bits;
    };
    auto star_bits = member_bits(star_set, n);
    auto host_bits = member_bits(host_set, host_hi);

    for (u64 k = 0; k <= search_radius; ++k) {
        bool match = true;
        for (u64 j = 0; j <= n; ++j) {
            if (star_bits[static_cast<std::size_t>(j)] !=
                host_bits[static_cast<std::size_t>(k + j)]) {
                match = false;
                break;
            }
        }
        if (match) return k;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Thin / Behrend / taut-violation / coprime checks
// ---------------------------------------------------------------------------

ThinCheck thin_check(const FamilySpec& spec, u64 k) {
    if (k < 1) throw std::invalid_argument("thin_check: need K >= 1");
    ThinCheck out;
    out.truncation_bound = k;
    KahanSum acc;
    for (u64 e : spec.materialize(k)) acc.add(1.0 / static_cast<double>(e));
    out.partial_sum = acc.value();
    out.verdict.property = "thin";
    if (const auto* tb = spec.get_if<ThinBlocks>()) {
        // Each block lies in [t, t+len-1], so its reciprocal sum is <= len/t;
        // the schedule is finite, hence the full series is certified finite.
        Rat bound = 0;
        for (const auto& blk : tb->schedule) bound += Rat(blk.len, blk.t);
        out.certified_bound = bound;
        out.verdict.verdict = Verdict::Certified;
        out.verdict.detail = "series bounded by sum of len/t over the schedule";
    } else if (const auto* ex = spec.get_if<Explicit>()) {
        Rat bound = 0;
        for (u64 e : ex->set) bound += Rat(1, e);
        out.certified_bound = bound;
        out.verdict.verdict = Verdict::Certified;
        out.verdict.detail = "finite set; the series is its own bound";
    } else {
        // Progression-prime tails diverge for every stride; partial sums can
        // never certify either way.
        out.verdict.verdict = Verdict::NoFiniteCertificate;
        out.verdict.detail = "partial sum only; no certified tail bound for this variant";
    }
    return out;
}

BehrendEvidence behrend_evidence(const FamilySpec& spec, const std::vector<u64>& k_grid,
                                 double tol, const DeSeriesOptions& opts) {
    if (k_grid.empty()) throw std::invalid_argument("behrend_evidence: empty K grid");
    if (spec.materialize(1).contains(1))
        throw std::invalid_argument("behrend_evidence: family contains 1");
    BehrendEvidence out;
    out.series = davenport_erdos_series(spec, k_grid, opts);
    out.verdict.property = "behrend-evidence";
    const DensityEstimate* last_exact = nullptr;
    for (const auto& v : out.series.values)
        if (v.kind == DensityKind::ExactPeriodic) last_exact = &v;
    if (last_exact == nullptr) {
        out.verdict.verdict = Verdict::NoFiniteCertificate;
        out.verdict.detail = "no exact checkpoint within budgets";
        return out;
    }
    out.final_exact_value = last_exact->value;
    if (*last_exact->exact >= Rat(1) - Rat(tol)) { // double -> rational is exact
        out.verdict.verdict = Verdict::HoldsOnTruncation;
        std::ostringstream d;
        d.precision(12);
        d << "final exact checkpoint " << out.final_exact_value << " >= 1 - " << tol;
        out.verdict.detail = d.str();
    } else {
        out.verdict.verdict = Verdict::Fails;
        std::ostringstream d;
        d.precision(12);
        d << "final exact checkpoint " << out.final_exact_value << " < 1 - " << tol;
        out.verdict.detail = d.str();
    }
    return out;
}

StructureVerdict taut_violation_evidence(const FamilySpec& spec, u64 c,
                                         const FamilySpec& witness,
                                         const std::vector<u64>& k_grid, double tol) {
    if (c < 1) throw std::invalid_argument("taut_violation_evidence: need c >= 1");
    if (k_grid.empty()) throw std::invalid_argument("taut_violation_evidence: empty K grid");
    StructureVerdict out;
    out.property = "taut-violation-evidence";
    const u64 kmax = k_grid.back();
    FiniteSet w = witness.materialize(kmax);
    FiniteSet host = spec.materialize(checked_mul(c, kmax));
    for (u64 a : w) {
        u64 ca = checked_mul(c, a);
        if (!host.contains(ca)) {
            out.verdict = Verdict::Fails;
            out.witness_value = ca;
            out.detail = "rescaled witness element missing from the family";
            return out;
        }
    }
    BehrendEvidence be = behrend_evidence(witness, k_grid, tol);
    if (be.verdict.verdict != Verdict::HoldsOnTruncation) {
        out.verdict = Verdict::Fails;
        out.detail = "witness family lacks Behrend evidence: " + be.verdict.detail;
        return out;
    }
    out.verdict = Verdict::WitnessFound;
    std::ostringstream d;
    d.precision(12);
    d << "c = " << c << "; inclusion exact on truncation " << kmax
      << "; witness Behrend evidence " << be.final_exact_value;
    out.detail = d.str();
    return out;
}

StructureVerdict check_pairwise_coprime(const FamilySpec& spec, u64 k) {
    if (k < 1) throw std::invalid_argument("check_pairwise_coprime: need K >= 1");
    StructureVerdict out;
    out.property = "pairwise-coprime";
    FiniteSet b = spec.materialize(k);
    const auto& es = b.elems();
    for (std::size_t i = 0; i < es.size(); ++i) {
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            if (gcd_u64(es[i], es[j]) != 1) {
                out.verdict = Verdict::Fails;
                out.witness_pair = {es[i], es[j]};
                out.detail = "gcd " + std::to_string(gcd_u64(es[i], es[j]));
                return out;
            }
        }
    }
    out.verdict = Verdict::HoldsOnTruncation;
    out.detail = "exact gcd scan of " + std::to_string(es.size()) + " elements";
    return out;
}

// ---------------------------------------------------------------------------
// Structured tautification / minimisation
// ---------------------------------------------------------------------------

namespace {

const Loosening& require_loosening(const FamilySpec& spec, const char* who) {
    const auto* l = spec.get_if<Loosening>();
    if (l == nullptr)
        throw std::invalid_argument(std::string(who) + ": spec must be a loosening-form family");
    if (l->scales.empty()) throw std::invalid_argument(std::string(who) + ": no scales");
    return *l;
}

FiniteSet scale_set_of(const Loosening& l) {
    return FiniteSet::from_values(l.scales);
}

} // namespace

nlohmann::json StructuredResult::to_json() const {
    nlohmann::json j;
    j["scale_set"] = scale_set.to_json();
    nlohmann::json items = nlohmann::json::array();
    for (const auto& c : certificate)
        items.push_back({{"hypothesis", c.hypothesis}, {"status", to_string(c.status)},
                         {"detail", c.detail}});
    j["certificate"] = items;
    return j;
}

StructuredResult structured_tautification(const FamilySpec& spec, const StructuredOptions& opts) {
    const Loosening& l = require_loosening(spec, "structured_tautification");
    FiniteSet e = scale_set_of(l);
    if (auto w = divisibility_witness(e)) {
        throw std::invalid_argument("structured_tautification: scale set not primitive, witness (" +
                                    std::to_string(w->divisor) + "," + std::to_string(w->multiple) + ")");
    }
    StructuredResult out;
    out.scale_set = FamilySpec(Explicit{e});
    out.certificate.push_back({"scale set primitive", Verdict::Certified, "exact divisibility scan"});
    for (std::size_t i = 0; i < l.patterns.size(); ++i) {
        const auto& pat = l.patterns[i];
        std::string name = "pattern " + std::to_string(i) + " (scale " +
                           std::to_string(l.scales[i]) + ") Behrend";
        if (opts.evidence_for_patterns) {
            FamilySpec pf(ScaledProgressionPrimes{1, pat});
            BehrendEvidence be = behrend_evidence(pf, opts.evidence_grid, opts.evidence_tol);
            out.certificate.push_back(
                {name,
                 be.verdict.verdict == Verdict::HoldsOnTruncation ? Verdict::HoldsOnTruncation
                                                                  : Verdict::Fails,
                 be.verdict.detail});
        } else if (pat.stride == 1) {
            out.certificate.push_back({name, Verdict::Declared,
                                       "full progression tail: a prime family with divergent "
                                       "reciprocal sum"});
        } else {
            out.certificate.push_back({name, Verdict::Declared,
                                       "thinned tail declared Behrend by caller (stride " +
                                           std::to_string(pat.stride) + ")"});
        }
    }
    // Tautness of E itself: finite truncations of a primitive set are taut;
    // nothing stronger is checkable here.
    out.certificate.push_back({"scale set taut", Verdict::Declared,
                               "finite primitive truncations are taut; the infinite claim is declared"});
    return out;
}

StructuredResult structured_minimisation(const FamilySpec& spec, const StructuredOptions& opts) {
    const Loosening& l = require_loosening(spec, "structured_minimisation");
    FiniteSet e = scale_set_of(l);
    if (auto w = divisibility_witness(e)) {
        throw std::invalid_argument("structured_minimisation: scale set not primitive, witness (" +
                                    std::to_string(w->divisor) + "," + std::to_string(w->multiple) + ")");
    }
    StructuredResult out;
    out.scale_set = FamilySpec(Explicit{e});
    out.certificate.push_back({"scale set primitive", Verdict::Certified, "exact divisibility scan"});
    for (std::size_t i = 0; i < l.patterns.size(); ++i) {
        const auto& pat = l.patterns[i];
        FamilySpec pf(ScaledProgressionPrimes{1, pat});
        StructureVerdict cop = check_pairwise_coprime(pf, opts.truncation_bound);
        if (cop.verdict == Verdict::Fails) {
            throw std::invalid_argument(
                "structured_minimisation: pattern " + std::to_string(i) +
                " not pairwise coprime, witness (" + std::to_string(cop.witness_pair->first) + "," +
                std::to_string(cop.witness_pair->second) + ")");
        }
        out.certificate.push_back({"pattern " + std::to_string(i) + " pairwise coprime",
                                   Verdict::HoldsOnTruncation, cop.detail});
        out.certificate.push_back({"pattern " + std::to_string(i) + " infinite", Verdict::Declared,
                                   "unbounded prime tail"});
    }
    // Minimality of E: for a finite E the free indicator is periodic with
    // period lcm(E); a full-period Toeplitz scan is decisive evidence.
    auto lcm = lcm_capped(e, 65'536);
    if (lcm && *lcm * 8 <= opts.truncation_bound * 64) {
        u64 window = std::max<u64>(4 * *lcm, 256);
        ToeplitzReport tr =
            toeplitz_scan(out.scale_set, 0, static_cast<i64>(std::min<u64>(*lcm, 512)), *lcm, window);
        out.certificate.push_back({"scale set minimal",
                                   tr.defects.empty() ? Verdict::HoldsOnTruncation : Verdict::Fails,
                                   tr.defects.empty()
                                       ? "periodic: every scanned position resolved within one period"
                                       : "defects found in a full-period scan"});
    } else {
        out.certificate.push_back(
            {"scale set minimal", Verdict::Declared, "lcm too large for a full-period scan"});
    }
    return out;
}

} // namespace bfree
