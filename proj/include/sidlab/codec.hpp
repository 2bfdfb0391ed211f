#pragma once

// Rate-1/2 terminated convolutional encoder and the exact log-domain
// BCJR (MAP) decoder.
//
// Generator masks use the D-polynomial convention: bit i of a mask is the
// coefficient of D^i, so octal (7,5) with memory 2 is the classic 4-state
// code 1+D+D^2 / 1+D^2. Encoding appends `memory` zero tail bits so every
// frame starts and ends in the all-zero state; the backward recursion
// relies on the known end state.
//
// L-value convention throughout: L = ln(P(bit=0)/P(bit=1)), bit 0 <-> +1.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sidlab/bits.hpp"

namespace sidlab {

struct CodeSpec {
    int memory = 2;
    std::uint32_t gen0 = 07;
    std::uint32_t gen1 = 05;
    bool termination = true;

    int num_states() const { return 1 << memory; }

    void validate() const {
        if (memory < 1) throw std::invalid_argument("CodeSpec: memory must be >= 1");
        if (memory > 16) throw std::invalid_argument("CodeSpec: memory above 16 unsupported");
        if (gen0 == 0 || gen1 == 0) throw std::invalid_argument("CodeSpec: zero generator mask");
        const std::uint32_t width = 1u << (memory + 1);
        if (gen0 >= width || gen1 >= width)
            throw std::invalid_argument("CodeSpec: generator mask wider than memory+1 bits");
        if (((gen0 | gen1) & 1u) == 0)
            throw std::invalid_argument("CodeSpec: no generator taps the current input");
    }
};

struct Trellis {
    struct Edge {
        std::uint16_t next = 0;
        std::uint8_t out0 = 0;
        std::uint8_t out1 = 0;
    };
    int memory = 0;
    int n_states = 0;
    std::vector<std::array<Edge, 2>> edges;  // [state][input bit]
};

inline Trellis build_trellis(const CodeSpec& spec) {
    spec.validate();
    Trellis t;
    t.memory = spec.memory;
    t.n_states = spec.num_states();
    t.edges.resize(static_cast<std::size_t>(t.n_states));
    const std::uint32_t state_mask = static_cast<std::uint32_t>(t.n_states - 1);
    for (int s = 0; s < t.n_states; ++s) {
        for (int u = 0; u < 2; ++u) {
            // Window bit 0 is the current input, bit i the input i steps ago.
            const std::uint32_t w =
                static_cast<std::uint32_t>(u) | (static_cast<std::uint32_t>(s) << 1);
            Trellis::Edge e;
            e.out0 = static_cast<std::uint8_t>(std::popcount(w & spec.gen0) & 1);
            e.out1 = static_cast<std::uint8_t>(std::popcount(w & spec.gen1) & 1);
            e.next = static_cast<std::uint16_t>(w & state_mask);
            t.edges[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)] = e;
        }
    }
    return t;
}

inline BitVec encode(const BitVec& info, const CodeSpec& spec) {
    if (info.empty()) throw std::invalid_argument("encode: empty input");
    const Trellis t = build_trellis(spec);
    const std::size_t tail = spec.termination ? static_cast<std::size_t>(spec.memory) : 0;
    BitVec out;
    out.reserve(2 * (info.size() + tail));
    std::uint32_t state = 0;
    auto step = [&](Bit u) {
        const auto& e = t.edges[state][u];
        out.push_back(e.out0);
        out.push_back(e.out1);
        state = e.next;
    };
    for (Bit b : info) step(b != 0 ? 1 : 0);
    for (std::size_t i = 0; i < tail; ++i) step(0);
    return out;
}

// Hard decisions paired with their a-posteriori L-values.
// Invariant: bits[i] == 0 iff llr[i] >= 0 (a tie at exactly 0 decides bit 0).
struct SoftWord {
    BitVec bits;
    std::vector<double> llr;

    std::size_t size() const { return bits.size(); }
};

// Decoder output range. +-infinity never leaves the decoder; it is reserved
// for a-priori injection by the feedback step.
inline constexpr double kLlrClamp = 50.0;

namespace detail {

inline constexpr double kLogZero = -1e30;       // log-domain "probability zero"
inline constexpr double kFrozenPenalty = -1e9;  // branch disagreeing with a +-inf prior

// Exact log(e^a + e^b).
inline double max_star(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b <= kLogZero) return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace detail

// BCJR forward-backward recursion in the log domain with exact log-sum
// (no max-log approximation). channel_llr holds 2*(K + memory) values for a
// terminated frame; apriori_llr holds K values or is empty for no prior.
// Returns the K info-bit posteriors; tail bits are not returned.
inline SoftWord decode_map(const std::vector<double>& channel_llr,
                           const std::vector<double>& apriori_llr, const CodeSpec& spec) {
    const Trellis t = build_trellis(spec);
    if (channel_llr.size() % 2 != 0)
        throw std::invalid_argument("decode_map: odd channel LLR count");
    const std::size_t total = channel_llr.size() / 2;
    const std::size_t tail = spec.termination ? static_cast<std::size_t>(spec.memory) : 0;
    if (total < tail + 1) throw std::invalid_argument("decode_map: frame too short");
    const std::size_t K = total - tail;
    if (!apriori_llr.empty() && apriori_llr.size() != K)
        throw std::invalid_argument("decode_map: a-priori length mismatch");

    const int S = t.n_states;
    const auto idx = [S](std::size_t k, int s) { return k * static_cast<std::size_t>(S) + s; };

    // Branch metrics: gamma[(k, s)][u].
    std::vector<std::array<double, 2>> gamma(total * static_cast<std::size_t>(S));
    for (std::size_t k = 0; k < total; ++k) {
        const double l0 = channel_llr[2 * k];
        const double l1 = channel_llr[2 * k + 1];
        double prior0 = 0.0, prior1 = 0.0;
        if (k < K && !apriori_llr.empty()) {
            const double la = apriori_llr[k];
            if (std::isinf(la)) {
                (la > 0 ? prior1 : prior0) = detail::kFrozenPenalty;
            } else {
                prior0 = 0.5 * la;
                prior1 = -0.5 * la;
            }
        }
        for (int s = 0; s < S; ++s) {
            for (int u = 0; u < 2; ++u) {
                const auto& e = t.edges[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)];
                const double g = 0.5 * ((e.out0 ? -l0 : l0) + (e.out1 ? -l1 : l1));
                gamma[idx(k, s)][static_cast<std::size_t>(u)] = g + (u == 0 ? prior0 : prior1);
            }
        }
    }

    // Forward recursion. The tail section admits only input 0.
    std::vector<double> alpha((total + 1) * static_cast<std::size_t>(S), detail::kLogZero);
    alpha[idx(0, 0)] = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
        const int umax = (k < K) ? 2 : 1;
        double best = detail::kLogZero;
        for (int s = 0; s < S; ++s) {
            const double a = alpha[idx(k, s)];
            if (a <= detail::kLogZero) continue;
            for (int u = 0; u < umax; ++u) {
                const auto& e = t.edges[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)];
                double& slot = alpha[idx(k + 1, e.next)];
                slot = detail::max_star(slot, a + gamma[idx(k, s)][static_cast<std::size_t>(u)]);
                if (slot > best) best = slot;
            }
        }
        for (int s = 0; s < S; ++s)
            if (alpha[idx(k + 1, s)] > detail::kLogZero) alpha[idx(k + 1, s)] -= best;
    }

    // Backward recursion from the known (terminated) or unknown end state.
    std::vector<double> beta((total + 1) * static_cast<std::size_t>(S), detail::kLogZero);
    if (spec.termination) {
        beta[idx(total, 0)] = 0.0;
    } else {
        for (int s = 0; s < S; ++s) beta[idx(total, s)] = 0.0;
    }
    for (std::size_t k = total; k-- > 0;) {
        const int umax = (k < K) ? 2 : 1;
        double best = detail::kLogZero;
        for (int s = 0; s < S; ++s) {
            double acc = detail::kLogZero;
            for (int u = 0; u < umax; ++u) {
                const auto& e = t.edges[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)];
                const double b = beta[idx(k + 1, e.next)];
                if (b <= detail::kLogZero) continue;
                acc = detail::max_star(acc, b + gamma[idx(k, s)][static_cast<std::size_t>(u)]);
            }
            beta[idx(k, s)] = acc;
            if (acc > best) best = acc;
        }
        if (best > detail::kLogZero)
            for (int s = 0; s < S; ++s)
                if (beta[idx(k, s)] > detail::kLogZero) beta[idx(k, s)] -= best;
    }

    // Per-bit posteriors over the info section.
    SoftWord word;
    word.bits.resize(K);
    word.llr.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        double num0 = detail::kLogZero, num1 = detail::kLogZero;
        for (int s = 0; s < S; ++s) {
            const double a = alpha[idx(k, s)];
            if (a <= detail::kLogZero) continue;
            for (int u = 0; u < 2; ++u) {
                const auto& e = t.edges[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)];
                const double b = beta[idx(k + 1, e.next)];
                if (b <= detail::kLogZero) continue;
                const double v = a + gamma[idx(k, s)][static_cast<std::size_t>(u)] + b;
                (u == 0 ? num0 : num1) = detail::max_star(u == 0 ? num0 : num1, v);
            }
        }
        double l = num0 - num1;
        if (l > kLlrClamp) l = kLlrClamp;
        if (l < -kLlrClamp) l = -kLlrClamp;
        word.llr[k] = l;
        word.bits[k] = l >= 0.0 ? 0 : 1;
    }
    return word;
}

}  // namespace sidlab
