#include "bfree/primes.hpp"

#include <cmath>

namespace bfree {

namespace {

u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

// Odd-only bit sieve up to limit (inclusive).
std::vector<u64> simple_sieve(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    primes.push_back(2);
    if (limit < 3) return primes;
    // bit i <-> odd number 2i+3
    std::size_t nbits = static_cast<std::size_t>((limit - 3) / 2 + 1);
    std::vector<u64> words((nbits + 63) / 64, ~u64(0));
    auto clear_bit = [&](std::size_t i) { words[i >> 6] &= ~(u64(1) << (i & 63)); };
    auto test_bit = [&](std::size_t i) { return (words[i >> 6] >> (i & 63)) & 1; };
    for (u64 n = 3; n * n <= limit; n += 2) {
        if (!test_bit(static_cast<std::size_t>((n - 3) / 2))) continue;
        for (u64 m = n * n; m <= limit; m += 2 * n)
            clear_bit(static_cast<std::size_t>((m - 3) / 2));
    }
    for (std::size_t i = 0; i < nbits; ++i)
        if (test_bit(i)) primes.push_back(2 * static_cast<u64>(i) + 3);
    return primes;
}

constexpr u64 kSegmentLen = u64(1) << 20;

} // namespace

std::vector<u64> primes_up_to(u64 limit) { return simple_sieve(limit); }

void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& fn) {
    if (hi <= lo || hi <= 2) {
        if (hi > lo && lo <= 2 && hi > 2) fn(2);
        return;
    }
    auto base = simple_sieve(isqrt_u64(hi - 1));
    if (lo <= 2 && hi > 2) fn(2);
    u64 start = std::max<u64>(lo, 3);
    if (start % 2 == 0) ++start;
    std::vector<char> seg;
    for (u64 seg_lo = start; seg_lo < hi; seg_lo += 2 * kSegmentLen) {
        u64 seg_hi = std::min(hi, seg_lo + 2 * kSegmentLen); // odd numbers in [seg_lo, seg_hi)
        std::size_t n = static_cast<std::size_t>((seg_hi - seg_lo + 1) / 2);
        seg.assign(n, 1);
        for (u64 p : base) {
            if (p == 2) continue;
            if (p * p >= seg_hi) break;
            u64 first = std::max(p * p, ((seg_lo + p - 1) / p) * p);
            if (first % 2 == 0) first += p;
            for (u64 m = first; m < seg_hi; m += 2 * p)
                seg[static_cast<std::size_t>((m - seg_lo) / 2)] = 0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (seg[i]) {
                u64 p = seg_lo + 2 * i;
                if (p >= lo) fn(p);
            }
        }
    }
}

FiniteSet primes_in_progression(u32 level, u64 limit) {
    if (level < 1) throw std::invalid_argument("primes_in_progression: level must be >= 1");
    if (level > 62) throw std::invalid_argument("primes_in_progression: level overflows 64-bit modulus");
    const u64 mod = u64(1) << (level + 1);
    const u64 res = (u64(1) << level) + 1;
    std::vector<u64> out;
    for_each_prime(2, limit + 1, [&](u64 p) {
        if (p % mod == res) out.push_back(p);
    });
    return FiniteSet::from_sorted(std::move(out));
}

std::vector<u64> progression_pattern(u32 level, u64 cutoff, u64 stride, u64 pmax) {
    if (stride < 1) throw std::invalid_argument("progression_pattern: stride must be >= 1");
    if (level < 1) throw std::invalid_argument("progression_pattern: level must be >= 1");
    if (level > 62) throw std::invalid_argument("progression_pattern: level overflows 64-bit modulus");
    const u64 mod = u64(1) << (level + 1);
    const u64 res = (u64(1) << level) + 1;
    std::vector<u64> out;
    if (pmax < cutoff) return out;
    u64 index = 0;
    for_each_prime(cutoff, pmax + 1, [&](u64 p) {
        if (p % mod == res) {
            if (index % stride == 0) out.push_back(p);
            ++index;
        }
    });
    return out;
}

u64 totient(u64 n) {
    u64 result = n;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

} // namespace bfree
