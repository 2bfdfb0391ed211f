#pragma once

// Soft Input Decryption: verify a SID block, and on failure flip combinations
// of its least-reliable bits in increasing-binary-counter order until the
// check value verifies or the attempt budget is exhausted. Counter bit j
// selects the position with the (j+1)-lowest |L|-value, so attempt 1 flips
// the least reliable bit, attempt 3 the two least reliable, and so on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sidlab/ccf.hpp"
#include "sidlab/codec.hpp"

namespace sidlab {

struct SidConfig {
    // d: number of lowest-|L| positions eligible for flipping; the search
    // runs the full counter, at most 2^d verifications.
    int flip_budget = 8;

    void validate() const {
        if (flip_budget < 0 || flip_budget > 24)
            throw std::invalid_argument("SidConfig: flip budget must be in [0, 24]");
    }

    std::uint64_t max_attempts() const { return std::uint64_t{1} << flip_budget; }
};

enum class SidStatus { success, failure };

struct SidResult {
    SidStatus status = SidStatus::failure;
    std::optional<SIDBlock> corrected;          // present on success
    std::uint64_t attempts_used = 0;            // verifications spent, attempt 0 included
    std::uint64_t attempt_index = 0;            // counter value that verified
    std::vector<std::size_t> flipped_positions; // original indices, on success

    bool ok() const { return status == SidStatus::success; }
};

// Permutation p with |llr[p[0]]| <= |llr[p[1]]| <= ...; ties keep ascending
// original index. An infinite L-value sorts last (maximal reliability).
inline std::vector<std::size_t> reliability_order(const std::vector<double>& llr) {
    std::vector<std::size_t> order(llr.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&llr](std::size_t a, std::size_t b) {
        return std::abs(llr[a]) < std::abs(llr[b]);
    });
    return order;
}

// Positions selected by the counter value: bit j of `attempt` marks order[j].
inline std::vector<std::size_t> flip_pattern(std::uint64_t attempt,
                                             const std::vector<std::size_t>& order) {
    if (order.size() < 64 && attempt >= (std::uint64_t{1} << order.size()))
        throw std::out_of_range("flip_pattern: attempt exceeds the counter range");
    std::vector<std::size_t> positions;
    for (std::size_t j = 0; (attempt >> j) != 0; ++j)
        if ((attempt >> j) & 1) positions.push_back(order[j]);
    return positions;
}

inline SidResult soft_input_decrypt(const SoftWord& word, const CcfKey& key, int tag_bits,
                                    const SidConfig& cfg) {
    cfg.validate();
    if (word.bits.size() != word.llr.size())
        throw std::invalid_argument("soft_input_decrypt: bits/llr length mismatch");
    if (word.bits.size() < static_cast<std::size_t>(tag_bits))
        throw std::invalid_argument("soft_input_decrypt: word shorter than the tag");

    const auto order = reliability_order(word.llr);
    const int d = std::min<int>(cfg.flip_budget, static_cast<int>(order.size()));
    const std::uint64_t attempts = std::uint64_t{1} << d;

    BitVec candidate;
    for (std::uint64_t a = 0; a < attempts; ++a) {
        candidate = word.bits;
        for (std::size_t j = 0; (a >> j) != 0; ++j)
            if ((a >> j) & 1) candidate[order[j]] ^= 1;
        SIDBlock block = SIDBlock::from_bits(candidate, tag_bits);
        if (verify(block, key)) {
            SidResult res;
            res.status = SidStatus::success;
            res.corrected = std::move(block);
            res.attempts_used = a + 1;
            res.attempt_index = a;
            res.flipped_positions = flip_pattern(a, order);
            return res;
        }
    }
    SidResult res;
    res.attempts_used = attempts;
    return res;
}

}  // namespace sidlab
