// window.hpp
// Half-open integer window [lo, hi) with one membership bit per integer.
// Bit j of the window refers to the integer lo + j.

#pragma once

#include "bfree/common.hpp"

#include <iosfwd>
#include <vector>

namespace bfree {

class Window {
public:
    // Requires 1 <= lo < hi <= 2^63.
    Window(u64 lo, u64 hi);

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }
    u64 size() const { return hi_ - lo_; }

    bool get(u64 n) const; // n in [lo, hi)
    void set(u64 n);
    void clear(u64 n);

    u64 popcount() const;

    // Bits above size() are always zero.
    const std::vector<u64>& words() const { return words_; }
    std::vector<u64>& words() { return words_; }

    void invert(); // complement within [lo, hi)

    std::vector<u64> members() const; // integers with bit set, ascending

    bool operator==(const Window&) const = default;

private:
    u64 lo_, hi_;
    std::vector<u64> words_;
};

// Raw dump: 16-byte header (lo, hi as little-endian u64) then the packed
// words, little-endian. Bit j of word w is the integer lo + 64*w + j.
void dump_window(const Window& w, std::ostream& os);
Window load_window(std::istream& is);

} // namespace bfree
