#include "bfree/int_set.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace bfree {

FiniteSet FiniteSet::from_sorted(std::vector<u64> elems) {
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (elems[i] < 1)
            throw std::invalid_argument("FiniteSet: elements must be >= 1");
        if (i > 0 && elems[i] <= elems[i - 1])
            throw std::invalid_argument("FiniteSet: elements must be strictly increasing");
    }
    FiniteSet s;
    s.elems_ = std::move(elems);
    return s;
}

FiniteSet FiniteSet::from_values(std::vector<u64> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return from_sorted(std::move(elems));
}

u64 FiniteSet::min() const {
    if (elems_.empty()) throw std::invalid_argument("FiniteSet::min on empty set");
    return elems_.front();
}

u64 FiniteSet::max() const {
    if (elems_.empty()) throw std::invalid_argument("FiniteSet::max on empty set");
    return elems_.back();
}

bool FiniteSet::contains(u64 v) const {
    return std::binary_search(elems_.begin(), elems_.end(), v);
}

namespace {

// Marks every proper multiple of every element, sieve-style. Needs max(B) bits
// of scratch; total work sum_b max/b.
std::vector<bool> dominated_mask_dense(const std::vector<u64>& es) {
    u64 mx = es.back();
    std::vector<bool> member(static_cast<std::size_t>(mx) + 1, false);
    for (u64 e : es) member[static_cast<std::size_t>(e)] = true;
    std::vector<bool> dominated(es.size(), false);
    for (u64 e : es) {
        for (u64 m = 2 * e; m <= mx; m += e) {
            if (member[static_cast<std::size_t>(m)]) {
                auto it = std::lower_bound(es.begin(), es.end(), m);
                dominated[static_cast<std::size_t>(it - es.begin())] = true;
            }
        }
    }
    return dominated;
}

// Quadratic fallback for sets with huge elements where a dense mask would not fit.
std::vector<bool> dominated_mask_sparse(const std::vector<u64>& es) {
    std::vector<bool> dominated(es.size(), false);
    for (std::size_t i = 0; i < es.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (!dominated[j] && es[i] % es[j] == 0) {
                dominated[i] = true;
                break;
            }
        }
    }
    return dominated;
}

constexpr u64 kDenseMaskLimit = u64(1) << 27; // 128 Mbit of scratch

std::vector<bool> dominated_mask(const std::vector<u64>& es) {
    if (es.back() <= kDenseMaskLimit) return dominated_mask_dense(es);
    return dominated_mask_sparse(es);
}

} // namespace

FiniteSet primitivize(const FiniteSet& b) {
    if (b.empty()) return b;
    const auto& es = b.elems();
    auto dominated = dominated_mask(es);
    std::vector<u64> kept;
    kept.reserve(es.size());
    for (std::size_t i = 0; i < es.size(); ++i)
        if (!dominated[i]) kept.push_back(es[i]);
    return FiniteSet::from_sorted(std::move(kept));
}

std::optional<DivisiblePair> divisibility_witness(const FiniteSet& b) {
    if (b.empty()) return std::nullopt;
    const auto& es = b.elems();
    auto dominated = dominated_mask(es);
    for (std::size_t i = 0; i < es.size(); ++i) {
        if (dominated[i]) {
            for (std::size_t j = 0; j < i; ++j)
                if (es[i] % es[j] == 0) return DivisiblePair{es[j], es[i]};
        }
    }
    return std::nullopt;
}

std::optional<u64> lcm_capped(const FiniteSet& s, u64 cap) {
    if (s.empty()) throw std::invalid_argument("lcm_capped: empty set");
    u64 l = 1;
    for (u64 e : s) {
        if (!lcm_fits(l, e, cap, l)) return std::nullopt;
    }
    return l;
}

BigInt lcm_exact(const FiniteSet& s) {
    if (s.empty()) throw std::invalid_argument("lcm_exact: empty set");
    BigInt l = 1;
    for (u64 e : s) {
        BigInt be = e;
        l = l / boost::multiprecision::gcd(l, be) * be;
    }
    return l;
}

bool pairwise_coprime(const FiniteSet& s) {
    const auto& es = s.elems();
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j)
            if (gcd_u64(es[i], es[j]) != 1) return false;
    return true;
}

void write_finite_set(std::ostream& os, const FiniteSet& s) {
    for (u64 e : s) os << e << '\n';
}

FiniteSet read_finite_set(std::istream& is) {
    std::vector<u64> es;
    u64 v;
    while (is >> v) es.push_back(v);
    return FiniteSet::from_sorted(std::move(es));
}

} // namespace bfree
