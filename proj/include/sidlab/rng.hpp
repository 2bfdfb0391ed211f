#pragma once

// Reproducible random streams for Monte Carlo trials.
//
// Each trial owns one RngStream derived from (seed, stream_id), so trials can
// run on any worker in any order and still produce identical results. The
// generator is splitmix64 (Steele/Lea/Flood construction, Vigna's mixer);
// Gaussians come from the Box-Muller transform with the paired sample cached.
// Run manifests record the algorithm identity below.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "sidlab/bits.hpp"

namespace sidlab {

inline constexpr const char* kRngAlgorithm = "splitmix64-boxmuller-v1";

class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(mix(seed ^ mix(stream_id + 0x9E3779B97F4A7C15ull))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    Bit next_bit() { return static_cast<Bit>(next_u64() >> 63); }

    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - next_double();  // (0, 1], keeps the log finite
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline BitVec random_bits(RngStream& rng, std::size_t n) {
    BitVec out(n);
    for (auto& b : out) b = rng.next_bit();
    return out;
}

}  // namespace sidlab
