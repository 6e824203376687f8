// oracles.hpp
// Independent reference implementations used only by tests. These stay
// deliberately naive (double loops, trial division) so they cannot share a
// bug with the production paths they check.

#pragma once

#include "bfree/common.hpp"
#include "bfree/int_set.hpp"

#include <cmath>
#include <vector>

namespace bfree::oracle {

// |M_B ∩ [1, n]| by direct divisibility testing.
inline u64 brute_count_multiples(const std::vector<u64>& b, u64 n) {
    u64 c = 0;
    for (u64 v = 1; v <= n; ++v) {
        for (u64 e : b) {
            if (v % e == 0) {
                ++c;
                break;
            }
        }
    }
    return c;
}

inline bool brute_is_member(const std::vector<u64>& b, u64 v) {
    if (v == 0) return !b.empty();
    for (u64 e : b)
        if (v % e == 0) return true;
    return false;
}

inline bool trial_is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Primes p <= limit with p == 2^level + 1 (mod 2^(level+1)), trial division.
inline std::vector<u64> trial_primes_in_progression(u32 level, u64 limit) {
    u64 mod = u64(1) << (level + 1);
    u64 res = (u64(1) << level) + 1;
    std::vector<u64> out;
    for (u64 p = 2; p <= limit; ++p)
        if (p % mod == res && trial_is_prime(p)) out.push_back(p);
    return out;
}

inline double harmonic(u64 n) {
    double s = 0.0;
    for (u64 k = n; k >= 1; --k) s += 1.0 / static_cast<double>(k); // small terms first
    return s;
}

// The existence-criterion inner count by a double loop: for each qualifying a,
// each multiple of a in [1, x] not divisible by a smaller element.
inline u64 brute_criterion_count(const std::vector<u64>& b_sorted, u64 x, u64 a_min) {
    u64 total = 0;
    for (std::size_t i = 0; i < b_sorted.size(); ++i) {
        u64 a = b_sorted[i];
        if (a < a_min || a > x) continue;
        for (u64 m = a; m <= x; m += a) {
            bool covered = false;
            for (std::size_t j = 0; j < i; ++j) {
                if (m % b_sorted[j] == 0) {
                    covered = true;
                    break;
                }
            }
            if (!covered) ++total;
        }
    }
    return total;
}

} // namespace bfree::oracle
