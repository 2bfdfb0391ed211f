#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sidlab/framing.hpp"

using namespace sidlab;

namespace {
const CcfKey kTestKey = CcfKey::from_hex("0f0e0d0c0b0a09080706050403020100");
}

TEST_CASE("interleave: perfect alternation at equal lengths") {
    const std::vector<int> a{1, 2}, b{10, 20};
    REQUIRE(interleave(a, b, FrameGeometry(2, 2)) == std::vector<int>{1, 10, 2, 20});
}

TEST_CASE("interleave: ratio 2 groups") {
    const std::vector<int> a{1, 2}, b{10, 20, 30, 40};
    REQUIRE(interleave(a, b, FrameGeometry(2, 4)) == std::vector<int>{1, 10, 20, 2, 30, 40});
}

TEST_CASE("interleave: singleton blocks") {
    REQUIRE(interleave<int>({1}, {2}, FrameGeometry(1, 1)) == std::vector<int>{1, 2});
}

TEST_CASE("interleave: non-divisible lengths spread the remainder forward") {
    // len_a=2, len_b=5 -> runs of 3 then 2
    const std::vector<int> a{1, 2}, b{10, 20, 30, 40, 50};
    REQUIRE(interleave(a, b, FrameGeometry(2, 5)) ==
            std::vector<int>{1, 10, 20, 30, 2, 40, 50});
}

TEST_CASE("deinterleave inverts interleave") {
    const std::vector<int> u{1, 10, 20, 2, 30, 40};
    const auto [a, b] = deinterleave(u, FrameGeometry(2, 4));
    REQUIRE(a == std::vector<int>{1, 2});
    REQUIRE(b == std::vector<int>{10, 20, 30, 40});
}

TEST_CASE("deinterleave rejects wrong lengths") {
    REQUIRE_THROWS_AS(deinterleave(std::vector<int>{1, 2, 3}, FrameGeometry(2, 2)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(interleave(std::vector<int>{1}, std::vector<int>{2, 3}, FrameGeometry(2, 2)),
                      std::invalid_argument);
}

TEST_CASE("deinterleave . interleave is the identity across geometries") {
    std::mt19937_64 gen(17);
    for (std::size_t len_a = 1; len_a <= 64; len_a += 7) {
        for (std::size_t r = 1; r <= 8; ++r) {
            const FrameGeometry g(len_a, len_a * r);
            std::vector<std::uint64_t> a(g.len_a), b(g.len_b);
            for (auto& v : a) v = gen();
            for (auto& v : b) v = gen();
            const auto u = interleave(a, b, g);
            const auto [a2, b2] = deinterleave(u, g);
            REQUIRE(a2 == a);
            REQUIRE(b2 == b);
        }
    }
    // non-divisible geometries as well
    for (const auto& [la, lb] : std::vector<std::pair<std::size_t, std::size_t>>{
             {2, 5}, {3, 7}, {212, 428}, {5, 9}}) {
        const FrameGeometry g(la, lb);
        std::vector<std::uint64_t> a(g.len_a), b(g.len_b);
        for (auto& v : a) v = gen();
        for (auto& v : b) v = gen();
        const auto [a2, b2] = deinterleave(interleave(a, b, g), g);
        REQUIRE(a2 == a);
        REQUIRE(b2 == b);
    }
}

TEST_CASE("position maps depend only on the geometry") {
    const FrameGeometry g(3, 6);
    const auto pa = g.a_positions();
    const auto pb = g.b_positions();
    std::vector<int> a{7, 8, 9}, b{1, 2, 3, 4, 5, 6};
    const auto u = interleave(a, b, g);
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(u[pa[i]] == a[i]);
    for (std::size_t j = 0; j < b.size(); ++j) REQUIRE(u[pb[j]] == b[j]);
}

TEST_CASE("build_frame: paper geometries") {
    const FramePair f1 = build_frame(BitVec(256, 0), BitVec(256, 1), kTestKey, 64, 64);
    REQUIRE(f1.block_a.size() == 320);
    REQUIRE(f1.block_b.size() == 320);
    REQUIRE(f1.geometry.len_u() == 640);
    REQUIRE(f1.geometry.ratio() == 1);

    const FramePair f2 = build_frame(BitVec(64, 0), BitVec(448, 1), kTestKey, 64, 64);
    REQUIRE(f2.block_a.size() == 128);
    REQUIRE(f2.block_b.size() == 512);
    REQUIRE(f2.geometry.ratio() == 4);

    REQUIRE(verify(f1.block_a, kTestKey));
    REQUIRE(verify(f1.block_b, kTestKey));
}

TEST_CASE("build_frame rejects a longer block a") {
    // 100+64 = 164 vs 100+63 = 163: len_b < len_a
    REQUIRE_THROWS_AS(build_frame(BitVec(100, 0), BitVec(100, 1), kTestKey, 64, 63),
                      std::invalid_argument);
}

TEST_CASE("FrameGeometry validation") {
    REQUIRE_THROWS_AS(FrameGeometry(0, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(FrameGeometry(4, 3), std::invalid_argument);
    REQUIRE_NOTHROW(FrameGeometry(4, 4));
}
