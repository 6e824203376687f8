// sieve.hpp
// Segmented sieving of the set of multiples M_B = union of b*Z over b in B,
// and of its complement F_B, over integer windows. Elements b > hi contribute
// nothing to [lo, hi) since lo >= 1 keeps 0 out of every window.

#pragma once

#include "bfree/common.hpp"
#include "bfree/family.hpp"
#include "bfree/int_set.hpp"
#include "bfree/window.hpp"

#include <functional>

namespace bfree {

inline constexpr u64 kDefaultSegmentLen = u64(1) << 20; // integers per segment

// Bit set iff some b in B divides the integer. Cost O(sum_b (hi-lo)/b + |B|).
Window sieve_multiples(const FiniteSet& b, u64 lo, u64 hi,
                       u64 segment_len = kDefaultSegmentLen);

// Complement window: the B-free integers in [lo, hi).
Window free_window(const FiniteSet& b, u64 lo, u64 hi,
                   u64 segment_len = kDefaultSegmentLen);

// Streams sieved segments of [lo, hi) in order without materializing the
// whole window. fn receives each segment window.
void for_each_sieved_segment(const FiniteSet& b, u64 lo, u64 hi, u64 segment_len,
                             const std::function<void(const Window&)>& fn);

// |M_B ∩ [1, n]|, exact.
u64 count_multiples(const FiniteSet& b, u64 n, u64 segment_len = kDefaultSegmentLen);
u64 count_multiples(const FamilySpec& spec, u64 n, u64 segment_len = kDefaultSegmentLen);

// |(M_B1 \ M_B2) ∩ [1, n]|, exact (bitwise and-not over paired segments).
u64 count_difference(const FiniteSet& b1, const FiniteSet& b2, u64 n,
                     u64 segment_len = kDefaultSegmentLen);
u64 count_difference(const FamilySpec& s1, const FamilySpec& s2, u64 n,
                     u64 segment_len = kDefaultSegmentLen);

// Running counts |M_B ∩ [1, x]| for every x in `checkpoints` (ascending),
// from one streaming pass.
std::vector<u64> count_multiples_at(const FiniteSet& b, const std::vector<u64>& checkpoints,
                                    u64 segment_len = kDefaultSegmentLen);

} // namespace bfree
