// int_set.hpp
// FiniteSet: a strictly increasing list of positive 64-bit integers, the
// finite truncations every other module works on. Plus primitivization
// (dropping elements divisible by another element) and capped lcm.

#pragma once

#include "bfree/common.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace bfree {

class FiniteSet {
public:
    FiniteSet() = default;

    // Validates: all elements >= 1, strictly increasing. Throws std::invalid_argument.
    static FiniteSet from_sorted(std::vector<u64> elems);

    // Sorts and deduplicates first; still rejects zeros.
    static FiniteSet from_values(std::vector<u64> elems);

    const std::vector<u64>& elems() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    u64 min() const;   // throws on empty
    u64 max() const;   // throws on empty
    bool contains(u64 v) const;

    bool operator==(const FiniteSet&) const = default;

    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

private:
    std::vector<u64> elems_;
};

// {b in B : no other element of B divides b}. Same set of multiples as B.
FiniteSet primitivize(const FiniteSet& b);

// A pair (d, m) from the set with d | m, d != m; nullopt iff the set is primitive.
struct DivisiblePair {
    u64 divisor;
    u64 multiple;
};
std::optional<DivisiblePair> divisibility_witness(const FiniteSet& b);

inline bool is_primitive(const FiniteSet& b) { return !divisibility_witness(b).has_value(); }

// Exact lcm of all elements if it is <= cap, otherwise nullopt (overflow is a
// value here, not a fault). Throws std::invalid_argument on an empty set.
std::optional<u64> lcm_capped(const FiniteSet& s, u64 cap);

// Exact lcm as a big integer; always succeeds.
BigInt lcm_exact(const FiniteSet& s);

bool pairwise_coprime(const FiniteSet& s);

// Newline-delimited decimal serialization, ascending.
void write_finite_set(std::ostream& os, const FiniteSet& s);
FiniteSet read_finite_set(std::istream& is);

} // namespace bfree
