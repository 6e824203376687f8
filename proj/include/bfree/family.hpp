// family.hpp
// FamilySpec: declarative description of a (possibly infinite) integer set,
// materializable to a FiniteSet truncation at any bound. Truncations are
// monotone in the bound and always emitted ascending.
//
// Variants:
//   explicit                   fixed finite list
//   interval_union             union of blocks (T, 2T] over listed T
//   thin_blocks                blocks [t_i, t_i+T_i-1] minus multiples of
//                              the surviving elements of earlier blocks
//   loosening                  union of scale_i * pattern_i, pattern_i a
//                              progression-prime family (see PatternSpec)
//   scaled_progression_primes  single scaled pattern
//   prime_powers               { scale * p^exponent : p prime, p == residue
//                              (mod modulus), p >= cutoff }
//   product                    pairwise products of two family materializations
//   union                      finite union of specs
//   odd_restriction            inner spec intersected with the odd integers

#pragma once

#include "bfree/common.hpp"
#include "bfree/int_set.hpp"

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <variant>
#include <vector>

namespace bfree {

class FamilySpec;

// Copyable heap indirection so variants can recurse.
template <typename T>
class box {
public:
    box() : p_(std::make_unique<T>()) {}
    box(T v) : p_(std::make_unique<T>(std::move(v))) {}
    box(const box& o) : p_(std::make_unique<T>(*o.p_)) {}
    box(box&&) noexcept = default;
    box& operator=(const box& o) {
        p_ = std::make_unique<T>(*o.p_);
        return *this;
    }
    box& operator=(box&&) noexcept = default;
    const T& operator*() const { return *p_; }
    T& operator*() { return *p_; }
    const T* operator->() const { return p_.get(); }
    T* operator->() { return p_.get(); }
    bool operator==(const box& o) const { return *p_ == *o.p_; }

private:
    std::unique_ptr<T> p_;
};

// A_i = every stride-th prime p == 2^level + 1 (mod 2^(level+1)), p >= cutoff.
struct PatternSpec {
    u32 level = 1;
    u64 cutoff = 2;
    u64 stride = 1;
    bool operator==(const PatternSpec&) const = default;
};

struct Explicit {
    FiniteSet set;
    bool operator==(const Explicit&) const = default;
};

struct IntervalUnion {
    std::vector<u64> levels; // each T contributes (T, 2T]
    bool operator==(const IntervalUnion&) const = default;
};

struct ThinBlocks {
    struct Block {
        u64 t = 0; // block start
        u64 len = 0; // block length T_i; block is [t, t+len-1]
        bool operator==(const Block&) const = default;
    };
    std::vector<Block> schedule;
    bool operator==(const ThinBlocks&) const = default;
};

struct Loosening {
    std::vector<u64> scales;
    std::vector<PatternSpec> patterns; // same length as scales
    bool operator==(const Loosening&) const = default;
};

struct ScaledProgressionPrimes {
    u64 scale = 1;
    PatternSpec pattern;
    bool operator==(const ScaledProgressionPrimes&) const = default;
};

struct PrimePowers {
    u64 scale = 1;
    u32 exponent = 1;
    u64 residue = 0;  // residue 0 with modulus 1 means all primes
    u64 modulus = 1;
    u64 cutoff = 2;
    bool operator==(const PrimePowers&) const = default;
};

struct Product {
    box<FamilySpec> scales;
    box<FamilySpec> pattern;
    bool operator==(const Product&) const = default;
};

struct UnionSpec {
    std::vector<FamilySpec> parts;
    bool operator==(const UnionSpec&) const = default;
};

struct OddRestriction {
    box<FamilySpec> inner;
    bool operator==(const OddRestriction&) const = default;
};

class FamilySpec {
public:
    using Variant = std::variant<Explicit, IntervalUnion, ThinBlocks, Loosening,
                                 ScaledProgressionPrimes, PrimePowers, Product,
                                 UnionSpec, OddRestriction>;

    FamilySpec() : v_(Explicit{}) {}
    FamilySpec(Variant v) : v_(std::move(v)) {}

    const Variant& variant() const { return v_; }

    template <typename T>
    const T* get_if() const {
        return std::get_if<T>(&v_);
    }

    // All elements <= bound, ascending, deduplicated. Monotone in bound.
    FiniteSet materialize(u64 bound) const;

    nlohmann::json to_json() const;
    static FamilySpec from_json(const nlohmann::json& j);

    bool operator==(const FamilySpec&) const = default;

    // Convenience constructors.
    static FamilySpec explicit_set(std::vector<u64> elems);
    static FamilySpec interval_union(std::vector<u64> levels);
    static FamilySpec all_primes(u64 scale = 1, u32 exponent = 1, u64 cutoff = 2);
    static FamilySpec union_of(std::vector<FamilySpec> parts);
    static FamilySpec odd_restriction(FamilySpec inner);
    static FamilySpec product_of(FamilySpec scales, FamilySpec pattern);

private:
    Variant v_;
};

} // namespace bfree
