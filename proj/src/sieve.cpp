#include "bfree/sieve.hpp"

#include <algorithm>
#include <bit>

namespace bfree {

namespace {

void mark_multiples_in(Window& w, const FiniteSet& b) {
    const u64 lo = w.lo(), hi = w.hi();
    for (u64 e : b) {
        if (e >= hi) break; // ascending: the rest are out of range too
        u64 first = ((lo + e - 1) / e) * e;
        for (u64 m = first; m < hi; m += e) w.set(m);
    }
}

} // namespace

void for_each_sieved_segment(const FiniteSet& b, u64 lo, u64 hi, u64 segment_len,
                             const std::function<void(const Window&)>& fn) {
    if (lo < 1 || lo >= hi) throw std::invalid_argument("sieve: need 1 <= lo < hi");
    if (hi > (u64(1) << 63)) throw std::out_of_range("sieve: hi exceeds 2^63");
    if (segment_len == 0) throw std::invalid_argument("sieve: zero segment length");
    for (u64 seg_lo = lo; seg_lo < hi; seg_lo += segment_len) {
        u64 seg_hi = std::min(hi, seg_lo + segment_len);
        Window w(seg_lo, seg_hi);
        mark_multiples_in(w, b);
        fn(w);
    }
}

Window sieve_multiples(const FiniteSet& b, u64 lo, u64 hi, u64 segment_len) {
    if (lo < 1 || lo >= hi) throw std::invalid_argument("sieve: need 1 <= lo < hi");
    if (hi > (u64(1) << 63)) throw std::out_of_range("sieve: hi exceeds 2^63");
    Window out(lo, hi);
    for_each_sieved_segment(b, lo, hi, segment_len, [&](const Window& seg) {
        // Segments are aligned to `out` starting at lo, so word offsets line up
        // only when (seg.lo - lo) is a multiple of 64; segment_len is, except
        // possibly for the last segment, which is the tail anyway.
        u64 off = seg.lo() - lo;
        if ((off & 63) == 0) {
            std::size_t base = static_cast<std::size_t>(off >> 6);
            for (std::size_t i = 0; i < seg.words().size(); ++i)
                out.words()[base + i] |= seg.words()[i];
        } else {
            for (u64 n : seg.members()) out.set(n);
        }
    });
    return out;
}

Window free_window(const FiniteSet& b, u64 lo, u64 hi, u64 segment_len) {
    Window w = sieve_multiples(b, lo, hi, segment_len);
    w.invert();
    return w;
}

u64 count_multiples(const FiniteSet& b, u64 n, u64 segment_len) {
    if (n < 1) throw std::invalid_argument("count_multiples: need n >= 1");
    u64 total = 0;
    for_each_sieved_segment(b, 1, n + 1, segment_len,
                            [&](const Window& seg) { total += seg.popcount(); });
    return total;
}

u64 count_multiples(const FamilySpec& spec, u64 n, u64 segment_len) {
    return count_multiples(spec.materialize(n), n, segment_len);
}

u64 count_difference(const FiniteSet& b1, const FiniteSet& b2, u64 n, u64 segment_len) {
    if (n < 1) throw std::invalid_argument("count_difference: need n >= 1");
    u64 total = 0;
    for (u64 seg_lo = 1; seg_lo <= n; seg_lo += segment_len) {
        u64 seg_hi = std::min(n + 1, seg_lo + segment_len);
        Window w1(seg_lo, seg_hi), w2(seg_lo, seg_hi);
        mark_multiples_in(w1, b1);
        mark_multiples_in(w2, b2);
        for (std::size_t i = 0; i < w1.words().size(); ++i)
            total += static_cast<u64>(std::popcount(w1.words()[i] & ~w2.words()[i]));
    }
    return total;
}

u64 count_difference(const FamilySpec& s1, const FamilySpec& s2, u64 n, u64 segment_len) {
    return count_difference(s1.materialize(n), s2.materialize(n), n, segment_len);
}

std::vector<u64> count_multiples_at(const FiniteSet& b, const std::vector<u64>& checkpoints,
                                    u64 segment_len) {
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1) throw std::invalid_argument("count_multiples_at: checkpoints >= 1");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("count_multiples_at: checkpoints must be ascending");
    }
    std::vector<u64> out(checkpoints.size(), 0);
    if (checkpoints.empty()) return out;
    u64 n = checkpoints.back();
    u64 running = 0;
    std::size_t next = 0;
    auto prefix_popcount = [](const Window& seg, u64 upto) {
        // bits for integers in [seg.lo, upto]
        u64 nbits = upto - seg.lo() + 1;
        u64 full = nbits >> 6;
        u64 c = 0;
        for (u64 i = 0; i < full; ++i)
            c += static_cast<u64>(std::popcount(seg.words()[static_cast<std::size_t>(i)]));
        u64 tail = nbits & 63;
        if (tail != 0) {
            u64 w = seg.words()[static_cast<std::size_t>(full)] & ((u64(1) << tail) - 1);
            c += static_cast<u64>(std::popcount(w));
        }
        return c;
    };
    for_each_sieved_segment(b, 1, n + 1, segment_len, [&](const Window& seg) {
        while (next < checkpoints.size() && checkpoints[next] < seg.hi()) {
            out[next] = running + prefix_popcount(seg, checkpoints[next]);
            ++next;
        }
        running += seg.popcount();
    });
    return out;
}

} // namespace bfree
