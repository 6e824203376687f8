#include "bfree/family.hpp"
#include "bfree/primes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace bfree {

using nlohmann::json;

namespace {

void append_range_capped(std::vector<u64>& out, u64 from, u64 to, u64 bound) {
    // integers in [from, to] limited to <= bound
    u64 hi = std::min(to, bound);
    for (u64 v = from; v <= hi; ++v) out.push_back(v);
}

// E_i = [t_i, t_i + len_i - 1] minus multiples of surviving elements of
// earlier blocks. Membership of each integer is independent of `bound`, so
// truncation stays monotone.
void materialize_thin_blocks(const ThinBlocks& tb, u64 bound, std::vector<u64>& out) {
    std::vector<u64> survivors; // all earlier E_i elements, ascending
    for (std::size_t i = 0; i < tb.schedule.size(); ++i) {
        const auto& blk = tb.schedule[i];
        if (blk.len == 0) throw std::invalid_argument("thin_blocks: zero-length block");
        if (i > 0) {
            const auto& prev = tb.schedule[i - 1];
            if (blk.t <= prev.t + prev.len - 1)
                throw std::invalid_argument("thin_blocks: blocks must be disjoint and ascending");
        }
        if (blk.t > bound) break; // later blocks start higher still
        u64 end = blk.t + blk.len - 1;
        u64 win_end = std::min(end, bound);
        std::size_t n = static_cast<std::size_t>(win_end - blk.t + 1);
        std::vector<char> hit(n, 0);
        for (u64 e : survivors) {
            u64 first = ((blk.t + e - 1) / e) * e;
            for (u64 m = first; m <= win_end; m += e)
                hit[static_cast<std::size_t>(m - blk.t)] = 1;
        }
        std::size_t kept_from = out.size();
        for (std::size_t j = 0; j < n; ++j)
            if (!hit[j]) out.push_back(blk.t + static_cast<u64>(j));
        // Later blocks sieve against the full E_i; if this block was cut by
        // `bound`, later blocks are entirely above `bound` anyway.
        survivors.insert(survivors.end(), out.begin() + static_cast<std::ptrdiff_t>(kept_from), out.end());
    }
}

u64 integer_root(u64 n, u32 e) {
    if (e == 1) return n;
    double guess = std::pow(static_cast<double>(n), 1.0 / e);
    u64 r = static_cast<u64>(guess);
    auto pow_le = [&](u64 base) {
        u64 acc = 1;
        for (u32 k = 0; k < e; ++k) {
            if (base != 0 && acc > n / base) return false;
            acc *= base;
        }
        return acc <= n;
    };
    while (r > 0 && !pow_le(r)) --r;
    while (pow_le(r + 1)) ++r;
    return r;
}

void materialize_prime_powers(const PrimePowers& pp, u64 bound, std::vector<u64>& out) {
    if (pp.scale == 0) throw std::invalid_argument("prime_powers: scale must be >= 1");
    if (pp.exponent == 0) throw std::invalid_argument("prime_powers: exponent must be >= 1");
    if (pp.modulus == 0) throw std::invalid_argument("prime_powers: modulus must be >= 1");
    if (pp.residue >= pp.modulus) throw std::invalid_argument("prime_powers: residue must be < modulus");
    if (bound < pp.scale) return;
    u64 pmax = integer_root(bound / pp.scale, pp.exponent);
    for_each_prime(std::max<u64>(pp.cutoff, 2), pmax + 1, [&](u64 p) {
        if (p % pp.modulus != pp.residue) return;
        u64 v = pp.scale;
        for (u32 k = 0; k < pp.exponent; ++k) v = checked_mul(v, p);
        if (v <= bound) out.push_back(v);
    });
}

} // namespace

FiniteSet FamilySpec::materialize(u64 bound) const {
    std::vector<u64> out;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Explicit>) {
                for (u64 e : node.set)
                    if (e <= bound) out.push_back(e);
            } else if constexpr (std::is_same_v<T, IntervalUnion>) {
                for (u64 t : node.levels) {
                    if (t == 0) throw std::invalid_argument("interval_union: levels must be >= 1");
                    if (t >= bound) continue;
                    append_range_capped(out, t + 1, checked_mul(t, 2), bound);
                }
            } else if constexpr (std::is_same_v<T, ThinBlocks>) {
                materialize_thin_blocks(node, bound, out);
            } else if constexpr (std::is_same_v<T, Loosening>) {
                if (node.scales.size() != node.patterns.size())
                    throw std::invalid_argument("loosening: scales/patterns length mismatch");
                for (std::size_t i = 0; i < node.scales.size(); ++i) {
                    u64 e = node.scales[i];
                    if (e == 0) throw std::invalid_argument("loosening: scales must be >= 1");
                    if (e > bound) continue;
                    const auto& pat = node.patterns[i];
                    for (u64 p : progression_pattern(pat.level, pat.cutoff, pat.stride, bound / e))
                        out.push_back(e * p);
                }
            } else if constexpr (std::is_same_v<T, ScaledProgressionPrimes>) {
                if (node.scale == 0)
                    throw std::invalid_argument("scaled_progression_primes: scale must be >= 1");
                if (node.scale <= bound) {
                    const auto& pat = node.pattern;
                    for (u64 p : progression_pattern(pat.level, pat.cutoff, pat.stride, bound / node.scale))
                        out.push_back(node.scale * p);
                }
            } else if constexpr (std::is_same_v<T, PrimePowers>) {
                materialize_prime_powers(node, bound, out);
            } else if constexpr (std::is_same_v<T, Product>) {
                FiniteSet scales = node.scales->materialize(bound);
                for (u64 s : scales) {
                    if (s == 0 || s > bound) continue;
                    FiniteSet pat = node.pattern->materialize(bound / s);
                    for (u64 p : pat) out.push_back(s * p);
                }
            } else if constexpr (std::is_same_v<T, UnionSpec>) {
                for (const auto& part : node.parts) {
                    FiniteSet sub = part.materialize(bound);
                    out.insert(out.end(), sub.begin(), sub.end());
                }
            } else if constexpr (std::is_same_v<T, OddRestriction>) {
                FiniteSet sub = node.inner->materialize(bound);
                for (u64 e : sub)
                    if (e % 2 == 1) out.push_back(e);
            }
        },
        v_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return FiniteSet::from_sorted(std::move(out));
}

// ---------------------------------------------------------------------------
// JSON (schema documented in docs/family_schema.json)
// ---------------------------------------------------------------------------

namespace {

json pattern_to_json(const PatternSpec& p) {
    return json{{"level", p.level}, {"cutoff", p.cutoff}, {"stride", p.stride}};
}

PatternSpec pattern_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("pattern: expected object");
    PatternSpec p;
    p.level = j.at("level").get<u32>();
    p.cutoff = j.value("cutoff", u64(2));
    p.stride = j.value("stride", u64(1));
    return p;
}

} // namespace

json FamilySpec::to_json() const {
    json j;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Explicit>) {
                j["variant"] = "explicit";
                j["elements"] = node.set.elems();
            } else if constexpr (std::is_same_v<T, IntervalUnion>) {
                j["variant"] = "interval_union";
                j["levels"] = node.levels;
            } else if constexpr (std::is_same_v<T, ThinBlocks>) {
                j["variant"] = "thin_blocks";
                json sched = json::array();
                for (const auto& b : node.schedule)
                    sched.push_back(json{{"t", b.t}, {"len", b.len}});
                j["schedule"] = sched;
            } else if constexpr (std::is_same_v<T, Loosening>) {
                j["variant"] = "loosening";
                j["scales"] = node.scales;
                json pats = json::array();
                for (const auto& p : node.patterns) pats.push_back(pattern_to_json(p));
                j["patterns"] = pats;
            } else if constexpr (std::is_same_v<T, ScaledProgressionPrimes>) {
                j["variant"] = "scaled_progression_primes";
                j["scale"] = node.scale;
                j["level"] = node.pattern.level;
                j["cutoff"] = node.pattern.cutoff;
                j["stride"] = node.pattern.stride;
            } else if constexpr (std::is_same_v<T, PrimePowers>) {
                j["variant"] = "prime_powers";
                j["scale"] = node.scale;
                j["exponent"] = node.exponent;
                j["residue"] = node.residue;
                j["modulus"] = node.modulus;
                j["cutoff"] = node.cutoff;
            } else if constexpr (std::is_same_v<T, Product>) {
                j["variant"] = "product";
                j["scales"] = node.scales->to_json();
                j["pattern"] = node.pattern->to_json();
            } else if constexpr (std::is_same_v<T, UnionSpec>) {
                j["variant"] = "union";
                json parts = json::array();
                for (const auto& p : node.parts) parts.push_back(p.to_json());
                j["parts"] = parts;
            } else if constexpr (std::is_same_v<T, OddRestriction>) {
                j["variant"] = "odd_restriction";
                j["inner"] = node.inner->to_json();
            }
        },
        v_);
    return j;
}

FamilySpec FamilySpec::from_json(const json& j) {
    if (!j.is_object() || !j.contains("variant"))
        throw std::invalid_argument("family: expected object with a \"variant\" tag");
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "explicit") {
        auto elems = j.at("elements").get<std::vector<u64>>();
        return FamilySpec(Explicit{FiniteSet::from_values(std::move(elems))});
    }
    if (variant == "interval_union") {
        return FamilySpec(IntervalUnion{j.at("levels").get<std::vector<u64>>()});
    }
    if (variant == "thin_blocks") {
        ThinBlocks tb;
        for (const auto& b : j.at("schedule"))
            tb.schedule.push_back({b.at("t").get<u64>(), b.at("len").get<u64>()});
        return FamilySpec(std::move(tb));
    }
    if (variant == "loosening") {
        Loosening l;
        l.scales = j.at("scales").get<std::vector<u64>>();
        for (const auto& p : j.at("patterns")) l.patterns.push_back(pattern_from_json(p));
        if (l.scales.size() != l.patterns.size())
            throw std::invalid_argument("loosening: scales/patterns length mismatch");
        return FamilySpec(std::move(l));
    }
    if (variant == "scaled_progression_primes") {
        ScaledProgressionPrimes s;
        s.scale = j.at("scale").get<u64>();
        s.pattern = pattern_from_json(j);
        return FamilySpec(s);
    }
    if (variant == "prime_powers") {
        PrimePowers p;
        p.scale = j.value("scale", u64(1));
        p.exponent = j.value("exponent", u32(1));
        p.residue = j.value("residue", u64(0));
        p.modulus = j.value("modulus", u64(1));
        p.cutoff = j.value("cutoff", u64(2));
        return FamilySpec(p);
    }
    if (variant == "product") {
        Product p;
        *p.scales = from_json(j.at("scales"));
        *p.pattern = from_json(j.at("pattern"));
        return FamilySpec(std::move(p));
    }
    if (variant == "union") {
        UnionSpec u;
        for (const auto& part : j.at("parts")) u.parts.push_back(from_json(part));
        return FamilySpec(std::move(u));
    }
    if (variant == "odd_restriction") {
        OddRestriction o;
        *o.inner = from_json(j.at("inner"));
        return FamilySpec(std::move(o));
    }
    throw std::invalid_argument("family: unknown variant \"" + variant + "\"");
}

FamilySpec FamilySpec::explicit_set(std::vector<u64> elems) {
    return FamilySpec(Explicit{FiniteSet::from_values(std::move(elems))});
}

FamilySpec FamilySpec::interval_union(std::vector<u64> levels) {
    return FamilySpec(IntervalUnion{std::move(levels)});
}

FamilySpec FamilySpec::all_primes(u64 scale, u32 exponent, u64 cutoff) {
    PrimePowers p;
    p.scale = scale;
    p.exponent = exponent;
    p.cutoff = cutoff;
    return FamilySpec(p);
}

FamilySpec FamilySpec::union_of(std::vector<FamilySpec> parts) {
    return FamilySpec(UnionSpec{std::move(parts)});
}

FamilySpec FamilySpec::odd_restriction(FamilySpec inner) {
    OddRestriction o;
    *o.inner = std::move(inner);
    return FamilySpec(std::move(o));
}

FamilySpec FamilySpec::product_of(FamilySpec scales, FamilySpec pattern) {
    Product p;
    *p.scales = std::move(scales);
    *p.pattern = std::move(pattern);
    return FamilySpec(std::move(p));
}

} // namespace bfree
