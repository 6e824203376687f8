#include "bfree/density.hpp"
#include "bfree/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bfree {

std::string to_string(DensityKind k) {
    switch (k) {
        case DensityKind::NaturalPartial: return "natural-partial";
        case DensityKind::LogPartial: return "log-partial";
        case DensityKind::ExactPeriodic: return "exact-periodic";
    }
    return "?";
}

namespace {

DensityEstimate make_exact(Rat v, std::optional<u64> n, DensityKind kind) {
    DensityEstimate e;
    e.kind = kind;
    e.value = static_cast<double>(v);
    e.exact = std::move(v);
    e.n = n;
    return e;
}

} // namespace

DensityEstimate natural_partial(const FiniteSet& b, u64 n) {
    if (n < 1) throw std::invalid_argument("natural_partial: need n >= 1");
    u64 c = count_multiples(b, n);
    return make_exact(Rat(c, n), n, DensityKind::NaturalPartial);
}

DensityEstimate natural_partial(const FamilySpec& spec, u64 n) {
    return natural_partial(spec.materialize(n), n);
}

DensityEstimate log_partial(const FamilySpec& spec, u64 n) {
    if (n < 2) throw std::invalid_argument("log_partial: need n >= 2");
    FiniteSet b = spec.materialize(n);
    KahanSum acc;
    for_each_sieved_segment(b, 1, n + 1, kDefaultSegmentLen, [&](const Window& seg) {
        for (u64 k : seg.members()) acc.add(1.0 / static_cast<double>(k));
    });
    DensityEstimate e;
    e.kind = DensityKind::LogPartial;
    e.value = acc.value() / std::log(static_cast<double>(n));
    e.n = n;
    return e;
}

// ---------------------------------------------------------------------------
// Inclusion-exclusion
// ---------------------------------------------------------------------------

namespace {

// Fast lane: every subset lcm divides a 64-bit L. Terms are +-L/lcm(S); the
// signed sum fits 2^24 * 2^62 < 2^127.
void ie_rec_u64(const std::vector<u64>& es, std::size_t idx, u64 cur, int sign, u64 period,
                __int128& acc) {
    for (std::size_t i = idx; i < es.size(); ++i) {
        u64 l = cur / gcd_u64(cur, es[i]) * es[i];
        acc += sign * static_cast<__int128>(period / l);
        ie_rec_u64(es, i + 1, l, -sign, period, acc);
    }
}

// Big lane: subset lcms tracked exactly; each subset contributes L/lcm(S).
void ie_rec_big(const std::vector<u64>& es, std::size_t idx, const BigInt& cur, int sign,
                const BigInt& period, BigInt& acc) {
    for (std::size_t i = idx; i < es.size(); ++i) {
        BigInt e = es[i];
        BigInt l = cur / boost::multiprecision::gcd(cur, e) * e;
        if (sign > 0)
            acc += period / l;
        else
            acc -= period / l;
        ie_rec_big(es, i + 1, l, -sign, period, acc);
    }
}

BigInt int128_to_big(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    BigInt hi = static_cast<u64>(u >> 64);
    BigInt out = (hi << 64) + static_cast<u64>(u);
    return neg ? -out : out;
}

} // namespace

Rat exact_density_finite(const FiniteSet& b, std::size_t subset_cap) {
    if (b.size() > subset_cap)
        throw BudgetError("exact_density_finite: |B| = " + std::to_string(b.size()) +
                          " exceeds the subset cap " + std::to_string(subset_cap) +
                          "; use exact_density_period or natural_partial");
    if (b.empty()) return Rat(0);
    FiniteSet p = primitivize(b); // same multiples, fewer subsets
    const auto& es = p.elems();
    auto small = lcm_capped(p, u64(1) << 62);
    if (small) {
        __int128 acc = 0;
        ie_rec_u64(es, 0, 1, +1, *small, acc);
        return Rat(int128_to_big(acc), BigInt(*small));
    }
    BigInt period = lcm_exact(p);
    BigInt acc = 0;
    ie_rec_big(es, 0, BigInt(1), +1, period, acc);
    return Rat(acc, period);
}

Rat exact_density_period(const FiniteSet& b, u64 period_cap) {
    if (b.empty()) return Rat(0);
    auto l = lcm_capped(b, period_cap);
    if (!l)
        throw BudgetError("exact_density_period: lcm exceeds the period cap " +
                          std::to_string(period_cap));
    u64 c = count_multiples(b, *l);
    return Rat(c, *l);
}

Rat exact_density_coprime(const FiniteSet& b) {
    if (!pairwise_coprime(b))
        throw std::invalid_argument("exact_density_coprime: set is not pairwise coprime");
    if (b.empty()) return Rat(0);
    // d = 1 - prod (1 - 1/b); keep numerator/denominator as growing products.
    BigInt num = 1, den = 1;
    for (u64 e : b) {
        num *= BigInt(e - 1);
        den *= BigInt(e);
    }
    return Rat(den - num, den);
}

// ---------------------------------------------------------------------------
// Davenport-Erdos series
// ---------------------------------------------------------------------------

namespace {

DensityEstimate de_checkpoint(const FiniteSet& trunc, u64 k, const DeSeriesOptions& opts) {
    if (trunc.empty()) return make_exact(Rat(0), std::nullopt, DensityKind::ExactPeriodic);
    if (lcm_capped(trunc, opts.period_cap).has_value())
        return make_exact(exact_density_period(trunc, opts.period_cap), std::nullopt,
                          DensityKind::ExactPeriodic);
    if (trunc.size() <= opts.subset_cap)
        return make_exact(exact_density_finite(trunc, opts.subset_cap), std::nullopt,
                          DensityKind::ExactPeriodic);
    if (pairwise_coprime(trunc))
        return make_exact(exact_density_coprime(trunc), std::nullopt, DensityKind::ExactPeriodic);
    u64 n = std::max<u64>(opts.fallback_n, checked_mul(k, 64));
    return natural_partial(trunc, n);
}

} // namespace

DensitySeries davenport_erdos_series(const FamilySpec& spec, const std::vector<u64>& k_grid,
                                     const DeSeriesOptions& opts) {
    for (std::size_t i = 1; i < k_grid.size(); ++i)
        if (k_grid[i] <= k_grid[i - 1])
            throw std::invalid_argument("davenport_erdos_series: K grid must be ascending");
    DensitySeries s;
    s.checkpoints = k_grid;
    std::optional<Rat> last_exact;
    for (u64 k : k_grid) {
        FiniteSet trunc = spec.materialize(k);
        s.values.push_back(de_checkpoint(trunc, k, opts));
        const auto& v = s.values.back();
        if (v.kind == DensityKind::ExactPeriodic) {
            if (last_exact && *v.exact < *last_exact)
                throw std::logic_error("davenport_erdos_series: exact checkpoints decreased");
            last_exact = *v.exact;
        }
    }
    return s;
}

OscillationProxies upper_lower_proxies(const FamilySpec& spec, const std::vector<u64>& checkpoints,
                                       u64 burn_in) {
    std::vector<u64> usable;
    for (u64 c : checkpoints)
        if (c >= burn_in && c >= 1) usable.push_back(c);
    std::sort(usable.begin(), usable.end());
    usable.erase(std::unique(usable.begin(), usable.end()), usable.end());
    if (usable.size() < 2)
        throw std::invalid_argument("upper_lower_proxies: need >= 2 checkpoints beyond burn_in");
    FiniteSet b = spec.materialize(usable.back());
    std::vector<u64> counts = count_multiples_at(b, usable);
    OscillationProxies out;
    out.checkpoints_used = usable.size();
    for (std::size_t i = 0; i < usable.size(); ++i) {
        Rat v(counts[i], usable[i]);
        if (i == 0 || v < out.min_value) {
            out.min_value = v;
            out.argmin = usable[i];
        }
        if (i == 0 || v > out.max_value) {
            out.max_value = v;
            out.argmax = usable[i];
        }
    }
    return out;
}

ErdosIntervalDensity erdos_interval_density(u64 t, const ErdosIntervalOptions& opts) {
    if (t < 1) throw std::invalid_argument("erdos_interval_density: need T >= 1");
    std::vector<u64> elems;
    for (u64 v = t + 1; v <= 2 * t; ++v) elems.push_back(v);
    FiniteSet b = FiniteSet::from_sorted(std::move(elems));
    ErdosIntervalDensity out;
    if (opts.exact) {
        Rat d;
        if (b.size() <= opts.subset_cap)
            d = exact_density_finite(b, opts.subset_cap);
        else
            d = exact_density_period(b, opts.period_cap); // throws BudgetError past the cap
        out.estimate = make_exact(std::move(d), std::nullopt, DensityKind::ExactPeriodic);
        out.stabilized = true;
        out.n_used = 0;
        return out;
    }
    u64 n = checked_mul(1000, t);
    if (n > opts.n_budget)
        throw BudgetError("erdos_interval_density: starting point 1000*T exceeds the n budget");
    // Double n until the relative change over one doubling drops below rel_tol.
    double prev = static_cast<double>(natural_partial(b, n).value);
    while (true) {
        u64 next = checked_mul(n, 2);
        if (next > opts.n_budget) {
            out.estimate = natural_partial(b, n);
            out.stabilized = false;
            out.n_used = n;
            return out;
        }
        double cur = static_cast<double>(natural_partial(b, next).value);
        n = next;
        if (cur > 0 && std::abs(cur - prev) / cur < opts.rel_tol) {
            out.estimate = natural_partial(b, n);
            out.stabilized = true;
            out.n_used = n;
            return out;
        }
        prev = cur;
    }
}

std::string density_series_csv(const DensitySeries& s) {
    std::ostringstream os;
    os.precision(15);
    os << "K,kind,value_num,value_den,value_float\n";
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
        const auto& v = s.values[i];
        os << s.checkpoints[i] << ',' << to_string(v.kind) << ',';
        if (v.exact)
            os << rat_num(*v.exact) << ',' << rat_den(*v.exact) << ',';
        else
            os << ",,";
        os << v.value << '\n';
    }
    return os.str();
}

} // namespace bfree
