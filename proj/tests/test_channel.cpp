#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "sidlab/channel.hpp"

using namespace sidlab;

TEST_CASE("modulate maps 0 to +1 and 1 to -1") {
    REQUIRE(modulate(BitVec{0, 1, 0}) == std::vector<double>{1.0, -1.0, 1.0});
    REQUIRE(modulate(BitVec{}).empty());
    REQUIRE(modulate(BitVec(5, 0)) == std::vector<double>(5, 1.0));
}

TEST_CASE("ChannelParams derives sigma^2 and Lc consistently") {
    for (double ebn0 : {-2.0, 0.0, 2.0, 5.0}) {
        const auto p = ChannelParams::from_ebn0(ebn0, 0.5);
        REQUIRE(p.noise_variance > 0.0);
        REQUIRE(p.lc > 0.0);
        REQUIRE_THAT(p.lc * p.noise_variance, Catch::Matchers::WithinAbs(2.0, 1e-12));
    }
    REQUIRE_THROWS_AS(ChannelParams::from_ebn0(1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ChannelParams::from_ebn0(1.0, 1.5), std::invalid_argument);
}

TEST_CASE("transmit: effectively noiseless at very high Eb/N0") {
    const auto p = ChannelParams::from_ebn0(200.0, 0.5);
    RngStream rng(1, 0);
    const std::vector<double> x(16, 1.0);
    const auto y = transmit(x, p, rng);
    for (double v : y) REQUIRE_THAT(v, Catch::Matchers::WithinAbs(1.0, 1e-6));
}

TEST_CASE("transmit: sample statistics match the configured variance") {
    const auto p = ChannelParams::from_ebn0(0.0, 0.5);  // sigma^2 = 1
    RngStream rng(1, 0);
    const std::size_t n = 1000000;
    const std::vector<double> x(n, 1.0);
    const auto y = transmit(x, p, rng);
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    REQUIRE_THAT(mean, Catch::Matchers::WithinAbs(1.0, 0.01));
    REQUIRE(var > p.noise_variance * 0.98);
    REQUIRE(var < p.noise_variance * 1.02);
}

TEST_CASE("transmit: streams are deterministic and distinct") {
    const auto p = ChannelParams::from_ebn0(1.0, 0.5);
    const std::vector<double> x(64, 1.0);
    RngStream r1(42, 7), r2(42, 7), r3(42, 8);
    const auto y1 = transmit(x, p, r1);
    const auto y2 = transmit(x, p, r2);
    const auto y3 = transmit(x, p, r3);
    REQUIRE(y1 == y2);
    REQUIRE(y1 != y3);
}

TEST_CASE("channel_llr: exact values and sign preservation") {
    const auto p2 = ChannelParams::from_ebn0(2.0, 0.5);
    const auto llr = channel_llr({1.0, 0.0, -0.3}, p2);
    REQUIRE_THAT(llr[0], Catch::Matchers::WithinAbs(4.0 * 0.5 * std::pow(10.0, 0.2), 1e-9));
    REQUIRE_THAT(llr[0], Catch::Matchers::WithinAbs(3.169786, 1e-4));
    REQUIRE(llr[1] == 0.0);  // erasure
    REQUIRE(llr[2] < 0.0);
}

TEST_CASE("uncoded hard-decision BER converges to Q(sqrt(2 R Eb/N0))") {
    const double ebn0_db = 2.0, rate = 0.5;
    const auto p = ChannelParams::from_ebn0(ebn0_db, rate);
    RngStream rng(3, 0);
    const std::size_t n = 1000000;
    const std::vector<double> x(n, 1.0);  // all bit 0
    const auto y = transmit(x, p, rng);
    const auto llr = channel_llr(y, p);
    std::size_t errors = 0;
    for (double l : llr) errors += (l < 0.0) ? 1 : 0;
    const double ber = static_cast<double>(errors) / static_cast<double>(n);
    const double expected =
        oracles::q_function(std::sqrt(2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
    REQUIRE(std::abs(ber - expected) <= 3.0 * se);
}
