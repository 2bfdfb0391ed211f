#pragma once

// Independent reference implementations used only by tests. Nothing here may
// call into the decoder or encoder under test: the encoder oracle keeps an
// explicit shift register, the MAP oracle marginalizes over every information
// word, and the BER oracle runs a probability-domain forward-backward pass.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sidlab/bits.hpp"

namespace oracles {

// Rate-1/2 feedforward encoder with an explicit shift register and zero tail.
inline sidlab::BitVec encode_shift_register(const sidlab::BitVec& info, int memory,
                                            std::uint32_t g0, std::uint32_t g1) {
    std::vector<int> reg(static_cast<std::size_t>(memory), 0);
    sidlab::BitVec out;
    out.reserve(2 * (info.size() + static_cast<std::size_t>(memory)));
    auto push = [&](int u) {
        int c0 = (g0 & 1u) ? u : 0;
        int c1 = (g1 & 1u) ? u : 0;
        for (int i = 1; i <= memory; ++i) {
            if ((g0 >> i) & 1u) c0 ^= reg[static_cast<std::size_t>(i - 1)];
            if ((g1 >> i) & 1u) c1 ^= reg[static_cast<std::size_t>(i - 1)];
        }
        out.push_back(static_cast<sidlab::Bit>(c0));
        out.push_back(static_cast<sidlab::Bit>(c1));
        for (int i = memory - 1; i > 0; --i)
            reg[static_cast<std::size_t>(i)] = reg[static_cast<std::size_t>(i - 1)];
        if (memory > 0) reg[0] = u;
    };
    for (sidlab::Bit b : info) push(b != 0 ? 1 : 0);
    for (int i = 0; i < memory; ++i) push(0);
    return out;
}

// Exact a-posteriori L-values by marginalizing the codeword likelihoods over
// all 2^K information words. Output is clamped to +-clamp, matching the
// decoder's documented output range. Practical for K <= ~16.
inline std::vector<double> map_posteriors_bruteforce(const std::vector<double>& channel_llr,
                                                     const std::vector<double>& apriori_llr,
                                                     int memory, std::uint32_t g0,
                                                     std::uint32_t g1, double clamp) {
    const std::size_t K = channel_llr.size() / 2 - static_cast<std::size_t>(memory);
    constexpr double kNone = -1e300;
    auto lse = [](double a, double b) {
        if (a < b) std::swap(a, b);
        if (b <= kNone) return a;
        return a + std::log1p(std::exp(b - a));
    };
    std::vector<double> num0(K, kNone), num1(K, kNone);
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << K); ++w) {
        sidlab::BitVec info(K);
        for (std::size_t i = 0; i < K; ++i) info[i] = static_cast<sidlab::Bit>((w >> i) & 1);
        const auto cw = encode_shift_register(info, memory, g0, g1);
        double ll = 0.0;
        for (std::size_t j = 0; j < cw.size(); ++j)
            ll += 0.5 * (cw[j] ? -channel_llr[j] : channel_llr[j]);
        if (!apriori_llr.empty())
            for (std::size_t i = 0; i < K; ++i)
                ll += 0.5 * (info[i] ? -apriori_llr[i] : apriori_llr[i]);
        for (std::size_t i = 0; i < K; ++i) {
            double& slot = info[i] ? num1[i] : num0[i];
            slot = lse(slot, ll);
        }
    }
    std::vector<double> post(K);
    for (std::size_t i = 0; i < K; ++i) {
        double l = num0[i] - num1[i];
        if (l > clamp) l = clamp;
        if (l < -clamp) l = -clamp;
        post[i] = l;
    }
    return post;
}

struct BerEstimate {
    double ber = 0.0;
    double se = 0.0;  // cluster-robust: frames are the sampling unit, not bits
};

// Single-purpose BER reference: encode (shift register), BPSK, AWGN, then a
// probability-domain BCJR pass, all on the standard library RNG.
inline BerEstimate bcjr_prob_domain_ber(std::size_t info_bits, std::size_t trials, double ebn0_db,
                                        int memory, std::uint32_t g0, std::uint32_t g1,
                                        std::uint64_t seed) {
    const int S = 1 << memory;
    const double sigma2 = 1.0 / (2.0 * 0.5 * std::pow(10.0, ebn0_db / 10.0));
    const double sigma = std::sqrt(sigma2);
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> bit(0, 1);
    std::normal_distribution<double> noise(0.0, sigma);

    // next state and outputs per (state, input)
    std::vector<std::array<int, 2>> nxt(static_cast<std::size_t>(S));
    std::vector<std::array<std::array<int, 2>, 2>> outs(static_cast<std::size_t>(S));
    for (int s = 0; s < S; ++s)
        for (int u = 0; u < 2; ++u) {
            // derive outputs by evaluating the taps on state s directly
            std::vector<int> reg(static_cast<std::size_t>(memory));
            for (int i = 0; i < memory; ++i) reg[static_cast<std::size_t>(i)] = (s >> i) & 1;
            int c0 = (g0 & 1u) ? u : 0;
            int c1 = (g1 & 1u) ? u : 0;
            for (int i = 1; i <= memory; ++i) {
                if ((g0 >> i) & 1u) c0 ^= reg[static_cast<std::size_t>(i - 1)];
                if ((g1 >> i) & 1u) c1 ^= reg[static_cast<std::size_t>(i - 1)];
            }
            outs[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)] = {c0, c1};
            nxt[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)] =
                ((s << 1) | u) & (S - 1);
        }

    std::uint64_t errors = 0, bits = 0;
    std::vector<std::uint32_t> per_frame(trials, 0);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        sidlab::BitVec info(info_bits);
        for (auto& b : info) b = static_cast<sidlab::Bit>(bit(gen));
        const auto cw = encode_shift_register(info, memory, g0, g1);
        std::vector<double> y(cw.size());
        for (std::size_t j = 0; j < cw.size(); ++j)
            y[j] = (cw[j] ? -1.0 : 1.0) + noise(gen);

        const std::size_t total = cw.size() / 2;
        auto pdf = [&](double v, int c) {
            const double x = c ? -1.0 : 1.0;
            return std::exp(-(v - x) * (v - x) / (2.0 * sigma2));
        };
        std::vector<std::vector<double>> alpha(total + 1, std::vector<double>(S, 0.0));
        alpha[0][0] = 1.0;
        for (std::size_t k = 0; k < total; ++k) {
            const int umax = k < info_bits ? 2 : 1;
            double norm = 0.0;
            for (int s = 0; s < S; ++s) {
                if (alpha[k][static_cast<std::size_t>(s)] == 0.0) continue;
                for (int u = 0; u < umax; ++u) {
                    const auto& o = outs[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)];
                    const double g =
                        pdf(y[2 * k], o[0]) * pdf(y[2 * k + 1], o[1]);
                    alpha[k + 1][static_cast<std::size_t>(
                        nxt[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)])] +=
                        alpha[k][static_cast<std::size_t>(s)] * g;
                }
            }
            for (int s = 0; s < S; ++s) norm += alpha[k + 1][static_cast<std::size_t>(s)];
            for (int s = 0; s < S; ++s) alpha[k + 1][static_cast<std::size_t>(s)] /= norm;
        }
        std::vector<std::vector<double>> beta(total + 1, std::vector<double>(S, 0.0));
        beta[total][0] = 1.0;
        for (std::size_t k = total; k-- > 0;) {
            const int umax = k < info_bits ? 2 : 1;
            double norm = 0.0;
            for (int s = 0; s < S; ++s) {
                double acc = 0.0;
                for (int u = 0; u < umax; ++u) {
                    const auto& o = outs[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)];
                    const double g = pdf(y[2 * k], o[0]) * pdf(y[2 * k + 1], o[1]);
                    acc += g * beta[k + 1][static_cast<std::size_t>(
                                     nxt[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)])];
                }
                beta[k][static_cast<std::size_t>(s)] = acc;
                norm += acc;
            }
            if (norm > 0.0)
                for (int s = 0; s < S; ++s) beta[k][static_cast<std::size_t>(s)] /= norm;
        }
        for (std::size_t k = 0; k < info_bits; ++k) {
            double p0 = 0.0, p1 = 0.0;
            for (int s = 0; s < S; ++s) {
                for (int u = 0; u < 2; ++u) {
                    const auto& o = outs[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)];
                    const double g = pdf(y[2 * k], o[0]) * pdf(y[2 * k + 1], o[1]);
                    const double v =
                        alpha[k][static_cast<std::size_t>(s)] * g *
                        beta[k + 1][static_cast<std::size_t>(
                            nxt[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)])];
                    (u ? p1 : p0) += v;
                }
            }
            const int hard = p1 > p0 ? 1 : 0;
            if (hard != info[k]) {
                ++errors;
                ++per_frame[trial];
            }
            ++bits;
        }
    }
    BerEstimate est;
    est.ber = static_cast<double>(errors) / static_cast<double>(bits);
    const double mean = static_cast<double>(errors) / static_cast<double>(trials);
    double var = 0.0;
    for (std::uint32_t e : per_frame) {
        const double d = static_cast<double>(e) - mean;
        var += d * d;
    }
    var /= static_cast<double>(trials - 1);
    est.se = std::sqrt(var / static_cast<double>(trials)) / static_cast<double>(info_bits);
    return est;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace oracles
