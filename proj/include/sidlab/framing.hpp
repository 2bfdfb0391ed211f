#pragma once

// Frame construction: blocks a and b, their interleaving into the joint
// message u, and the inverse. The same fixed position permutation applies to
// bits before encoding and to L-values after decoding, so block-wise L-value
// extraction is positionally exact.
//
// Interleaving rule: each a-element is followed by a run of b-elements. Runs
// have length len_b/len_a; when len_a does not divide len_b the remainder is
// spread one-per-group over the leading groups, which reduces to perfect
// r-alternation whenever the lengths do divide. (The non-divisible case is
// needed for the 212/428 split of the length-insensitivity experiments.)

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sidlab/ccf.hpp"

namespace sidlab {

struct FrameGeometry {
    std::size_t len_a = 0;
    std::size_t len_b = 0;

    FrameGeometry(std::size_t la, std::size_t lb) : len_a(la), len_b(lb) {
        if (len_a == 0) throw std::invalid_argument("FrameGeometry: empty block a");
        if (len_b < len_a)
            throw std::invalid_argument("FrameGeometry: block b shorter than block a");
    }

    std::size_t len_u() const { return len_a + len_b; }
    std::size_t ratio() const { return len_b / len_a; }

    // Length of the b-run following a-element i.
    std::size_t b_run(std::size_t i) const {
        return len_b / len_a + (i < len_b % len_a ? 1 : 0);
    }

    // u-position of every a-element / b-element.
    std::vector<std::size_t> a_positions() const {
        std::vector<std::size_t> pos(len_a);
        std::size_t u = 0;
        for (std::size_t i = 0; i < len_a; ++i) {
            pos[i] = u;
            u += 1 + b_run(i);
        }
        return pos;
    }

    std::vector<std::size_t> b_positions() const {
        std::vector<std::size_t> pos(len_b);
        std::size_t u = 0, j = 0;
        for (std::size_t i = 0; i < len_a; ++i) {
            ++u;  // the a-element
            for (std::size_t k = 0; k < b_run(i); ++k) pos[j++] = u++;
        }
        return pos;
    }
};

template <typename T>
std::vector<T> interleave(const std::vector<T>& a, const std::vector<T>& b,
                          const FrameGeometry& g) {
    if (a.size() != g.len_a || b.size() != g.len_b)
        throw std::invalid_argument("interleave: geometry mismatch");
    std::vector<T> u;
    u.reserve(g.len_u());
    std::size_t bi = 0;
    for (std::size_t i = 0; i < g.len_a; ++i) {
        u.push_back(a[i]);
        for (std::size_t k = 0; k < g.b_run(i); ++k) u.push_back(b[bi++]);
    }
    return u;
}

template <typename T>
std::pair<std::vector<T>, std::vector<T>> deinterleave(const std::vector<T>& u,
                                                       const FrameGeometry& g) {
    if (u.size() != g.len_u()) throw std::invalid_argument("deinterleave: geometry mismatch");
    std::vector<T> a, b;
    a.reserve(g.len_a);
    b.reserve(g.len_b);
    std::size_t ui = 0;
    for (std::size_t i = 0; i < g.len_a; ++i) {
        a.push_back(u[ui++]);
        for (std::size_t k = 0; k < g.b_run(i); ++k) b.push_back(u[ui++]);
    }
    return {std::move(a), std::move(b)};
}

struct FramePair {
    SIDBlock block_a;
    SIDBlock block_b;
    FrameGeometry geometry;
};

inline FramePair build_frame(const BitVec& message_a, const BitVec& message_b, const CcfKey& key,
                             int tag_bits_a, int tag_bits_b) {
    SIDBlock a = make_sid_block(message_a, key, tag_bits_a);
    SIDBlock b = make_sid_block(message_b, key, tag_bits_b);
    FrameGeometry g(a.size(), b.size());  // throws on geometry violation
    return FramePair{std::move(a), std::move(b), g};
}

}  // namespace sidlab
