#pragma once

// BPSK over AWGN and the matching channel L-values.
//
// Eb/N0 accounting: Eb is information-bit energy, so the noise variance
// carries the code-rate factor,
//     sigma^2 = 1 / (2 * R * 10^(EbN0_dB / 10)),
// and the channel reliability Lc = 2 / sigma^2 turns a received sample into
// the exact LLR ln(P(bit=0|y) / P(bit=1|y)) under the 0 -> +1 mapping.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sidlab/bits.hpp"
#include "sidlab/rng.hpp"

namespace sidlab {

struct ChannelParams {
    double ebn0_db = 0.0;
    double code_rate = 0.5;
    double noise_variance = 0.0;  // sigma^2
    double lc = 0.0;              // Lc = 2 / sigma^2

    static ChannelParams from_ebn0(double ebn0_db, double code_rate = 0.5) {
        if (!(code_rate > 0.0) || code_rate > 1.0)
            throw std::invalid_argument("ChannelParams: code rate must be in (0, 1]");
        const double snr = std::pow(10.0, ebn0_db / 10.0);
        ChannelParams p;
        p.ebn0_db = ebn0_db;
        p.code_rate = code_rate;
        p.noise_variance = 1.0 / (2.0 * code_rate * snr);
        p.lc = 4.0 * code_rate * snr;
        return p;
    }
};

// Bit 0 -> +1.0, bit 1 -> -1.0 (unit energy per coded bit).
inline std::vector<double> modulate(const BitVec& bits) {
    std::vector<double> symbols(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) symbols[i] = bits[i] ? -1.0 : 1.0;
    return symbols;
}

inline std::vector<double> transmit(const std::vector<double>& symbols,
                                    const ChannelParams& params, RngStream& rng) {
    const double sigma = std::sqrt(params.noise_variance);
    std::vector<double> out(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i)
        out[i] = symbols[i] + sigma * rng.next_gaussian();
    return out;
}

inline std::vector<double> channel_llr(const std::vector<double>& received,
                                       const ChannelParams& params) {
    std::vector<double> llr(received.size());
    for (std::size_t i = 0; i < received.size(); ++i) llr[i] = params.lc * received[i];
    return llr;
}

}  // namespace sidlab
