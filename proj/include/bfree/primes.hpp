// primes.hpp
// Segmented Eratosthenes utilities: prime enumeration, primes in the
// progressions 2^(i+1) Z + 2^i + 1, Euler totient for small moduli.

#pragma once

#include "bfree/common.hpp"
#include "bfree/int_set.hpp"

#include <functional>
#include <vector>

namespace bfree {

std::vector<u64> primes_up_to(u64 limit);

// Calls fn(p) for every prime p in [lo, hi), ascending. Segmented, so hi up to
// ~1e9 is fine memory-wise.
void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& fn);

// All primes p <= limit with p == 2^i + 1 (mod 2^(i+1)), for level i >= 1.
// Distinct levels are disjoint: every odd prime lands in exactly one.
// Throws std::invalid_argument on level < 1 or modulus overflow (level > 62).
FiniteSet primes_in_progression(u32 level, u64 limit);

// Ascending primes of the level-i progression, >= cutoff, every stride-th one
// (indices 0, stride, 2*stride, ... of the qualifying list), capped at pmax.
std::vector<u64> progression_pattern(u32 level, u64 cutoff, u64 stride, u64 pmax);

u64 totient(u64 n);

} // namespace bfree
