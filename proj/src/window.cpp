#include "bfree/window.hpp"

#include <bit>
#include <istream>
#include <ostream>

namespace bfree {

Window::Window(u64 lo, u64 hi) : lo_(lo), hi_(hi) {
    if (lo < 1 || lo >= hi) throw std::invalid_argument("Window: need 1 <= lo < hi");
    if (hi > (u64(1) << 63)) throw std::out_of_range("Window: hi exceeds 2^63");
    words_.assign(static_cast<std::size_t>((size() + 63) / 64), 0);
}

bool Window::get(u64 n) const {
    u64 j = n - lo_;
    return (words_[static_cast<std::size_t>(j >> 6)] >> (j & 63)) & 1;
}

void Window::set(u64 n) {
    u64 j = n - lo_;
    words_[static_cast<std::size_t>(j >> 6)] |= u64(1) << (j & 63);
}

void Window::clear(u64 n) {
    u64 j = n - lo_;
    words_[static_cast<std::size_t>(j >> 6)] &= ~(u64(1) << (j & 63));
}

u64 Window::popcount() const {
    u64 c = 0;
    for (u64 w : words_) c += static_cast<u64>(std::popcount(w));
    return c;
}

void Window::invert() {
    for (auto& w : words_) w = ~w;
    u64 tail = size() & 63;
    if (tail != 0) words_.back() &= (u64(1) << tail) - 1;
}

std::vector<u64> Window::members() const {
    std::vector<u64> out;
    out.reserve(static_cast<std::size_t>(popcount()));
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
        u64 w = words_[wi];
        while (w != 0) {
            int b = std::countr_zero(w);
            out.push_back(lo_ + (static_cast<u64>(wi) << 6) + static_cast<u64>(b));
            w &= w - 1;
        }
    }
    return out;
}

namespace {

void put_u64_le(std::ostream& os, u64 v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), 8);
}

u64 get_u64_le(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw std::runtime_error("window load: truncated input");
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(buf[i]) << (8 * i);
    return v;
}

} // namespace

void dump_window(const Window& w, std::ostream& os) {
    put_u64_le(os, w.lo());
    put_u64_le(os, w.hi());
    for (u64 word : w.words()) put_u64_le(os, word);
}

Window load_window(std::istream& is) {
    u64 lo = get_u64_le(is);
    u64 hi = get_u64_le(is);
    Window w(lo, hi);
    for (auto& word : w.words()) word = get_u64_le(is);
    u64 tail = w.size() & 63;
    if (tail != 0 && (w.words().back() >> tail) != 0)
        throw std::runtime_error("window load: nonzero bits beyond hi");
    return w;
}

} // namespace bfree
