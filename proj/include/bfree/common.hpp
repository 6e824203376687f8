// common.hpp
// Shared aliases, exact rational type, compensated summation, checked arithmetic.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bfree {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;

// Exact arithmetic: subset lcms and periodic densities outgrow 64 bits quickly.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Thrown when a computation would exceed its configured budget (elements, lcm,
// calibration samples, ...). CLI maps this to its own exit code.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Kahan-Babuska compensated accumulator. The log-partial and prime-reciprocal
// sums add ~1e7 terms; plain doubles would drift past the 1e-10 budget.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

inline u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("64-bit multiply overflow: " + std::to_string(a) +
                                  " * " + std::to_string(b));
    return r;
}

inline u64 checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("64-bit add overflow");
    return r;
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// lcm(a,b) or nullopt if it would exceed `cap`.
inline bool lcm_fits(u64 a, u64 b, u64 cap, u64& out) {
    u64 g = gcd_u64(a, b);
    u64 q = a / g;
    if (b != 0 && q > cap / b) return false;
    u64 l = q * b;
    if (l > cap) return false;
    out = l;
    return true;
}

} // namespace bfree
