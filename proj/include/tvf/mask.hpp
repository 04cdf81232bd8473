#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace tvf {

/// Fixed-width bit set over vertex positions 0..255. Used as the key of every
/// memo table (induced subgraphs of one root graph, faces of one complex).
class VertexMask {
public:
    static constexpr int kWords = 4;
    static constexpr int kCapacity = 64 * kWords;

    constexpr VertexMask() = default;

    static VertexMask single(int i) {
        VertexMask m;
        m.set(i);
        return m;
    }
    static VertexMask first(int n) {
        VertexMask m;
        for (int w = 0; w < kWords && n > 0; ++w, n -= 64)
            m.words_[w] = n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
        return m;
    }

    void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }
    /// Lowest set position, or -1.
    int lowest() const {
        for (int w = 0; w < kWords; ++w)
            if (words_[w]) return 64 * w + std::countr_zero(words_[w]);
        return -1;
    }
    /// Next set position strictly after i, or -1.
    int next(int i) const {
        ++i;
        if (i >= kCapacity) return -1;
        int w = i >> 6;
        std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (i & 63));
        while (true) {
            if (cur) return 64 * w + std::countr_zero(cur);
            if (++w == kWords) return -1;
            cur = words_[w];
        }
    }
    bool intersects(const VertexMask& o) const {
        for (int w = 0; w < kWords; ++w)
            if (words_[w] & o.words_[w]) return true;
        return false;
    }
    bool subset_of(const VertexMask& o) const {
        for (int w = 0; w < kWords; ++w)
            if (words_[w] & ~o.words_[w]) return false;
        return true;
    }

    VertexMask& operator|=(const VertexMask& o) {
        for (int w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
        return *this;
    }
    VertexMask& operator&=(const VertexMask& o) {
        for (int w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
        return *this;
    }
    /// Set difference.
    VertexMask& operator-=(const VertexMask& o) {
        for (int w = 0; w < kWords; ++w) words_[w] &= ~o.words_[w];
        return *this;
    }
    friend VertexMask operator|(VertexMask a, const VertexMask& b) { return a |= b; }
    friend VertexMask operator&(VertexMask a, const VertexMask& b) { return a &= b; }
    friend VertexMask operator-(VertexMask a, const VertexMask& b) { return a -= b; }

    friend bool operator==(const VertexMask&, const VertexMask&) = default;
    friend auto operator<=>(const VertexMask& a, const VertexMask& b) {
        for (int w = kWords - 1; w >= 0; --w)
            if (a.words_[w] != b.words_[w]) return a.words_[w] <=> b.words_[w];
        return std::strong_ordering::equal;
    }

    std::size_t hash() const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
        return h;
    }

    template <class F>
    void for_each(F&& f) const {
        for (int w = 0; w < kWords; ++w) {
            std::uint64_t cur = words_[w];
            while (cur) {
                f(64 * w + std::countr_zero(cur));
                cur &= cur - 1;
            }
        }
    }

private:
    std::array<std::uint64_t, kWords> words_{};
};

struct VertexMaskHash {
    std::size_t operator()(const VertexMask& m) const { return m.hash(); }
};

} // namespace tvf
