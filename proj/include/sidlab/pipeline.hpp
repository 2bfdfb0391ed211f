#pragma once

// The experiment state machines, one trial each:
//
//   baseline  encode/transmit/decode only (BER_cd1)
//   feedback  step 1 SID on a', on success pin its L-values and re-decode
//   serial    feedback steps 1-2, then step 3: SID on the re-decoded b'
//   parallel  step 1 SID on both blocks of one shared first decoding; the
//             verified branch feeds back and steps 2-3 run on the other block
//
// Stage error counts are over the whole frame and against ground truth; a
// stage that does not run leaves the count unchanged (the "BER remains
// BER_cd1" convention). Counting corrected blocks against ground truth means
// a check-value collision would surface as residual errors rather than being
// assumed correct; such trials carry the collision flag.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sidlab/channel.hpp"
#include "sidlab/codec.hpp"
#include "sidlab/framing.hpp"
#include "sidlab/sid.hpp"

namespace sidlab {

enum class Scheme { baseline, feedback, serial, parallel };

inline const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::baseline: return "baseline";
        case Scheme::feedback: return "feedback";
        case Scheme::serial: return "serial";
        case Scheme::parallel: return "parallel";
    }
    return "?";
}

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "baseline") return Scheme::baseline;
    if (s == "feedback") return Scheme::feedback;
    if (s == "serial") return Scheme::serial;
    if (s == "parallel") return Scheme::parallel;
    throw std::invalid_argument("unknown scheme: " + s);
}

enum class FeedbackSource { none, block_a, block_b };

struct PipelineConfig {
    CodeSpec code;
    SidConfig sid;
};

// Per-trial record of errors and SID outcomes after each stage.
// sid_a_success / sid_b_success report whether the block ended verified at
// the step that tried it (step 1 for a, step 3 for b in the serial scheme;
// either step in the parallel scheme).
struct StageTrace {
    Scheme scheme = Scheme::baseline;
    std::uint32_t bits_total = 0;   // info bits per frame (len_u)
    std::uint32_t errors_cd1 = 0;   // after the first decoding
    std::uint32_t errors_1sid = 0;  // after step 1
    std::uint32_t errors_cd2 = 0;   // after the feedback re-decoding
    std::uint32_t errors_2sid = 0;  // after step 3
    bool sid_a_success = false;
    bool sid_b_success = false;

    // diagnostics
    std::uint32_t errors_a_cd1 = 0;  // per-block split of errors_cd1
    std::uint32_t errors_b_cd1 = 0;
    std::uint32_t errors_a_cd2 = 0;  // per-block split of errors_cd2, valid when redecode_ran
    std::uint32_t errors_b_cd2 = 0;
    bool redecode_ran = false;
    FeedbackSource feedback_from = FeedbackSource::none;
    bool collision = false;          // a verified block disagreed with ground truth
    std::uint64_t sid_attempts = 0;  // total check-value verifications spent
};

// A-priori L-values over u for the feedback step: the corrected block's
// positions are pinned to +-infinity asserting the corrected bit value
// (+inf for bit 0), every other position gets 0.
inline std::vector<double> feedback_llrs(const SIDBlock& corrected, FeedbackSource which,
                                         const FrameGeometry& g) {
    const double inf = std::numeric_limits<double>::infinity();
    const BitVec bits = corrected.bits();
    const std::vector<std::size_t> pos =
        (which == FeedbackSource::block_a) ? g.a_positions() : g.b_positions();
    if (which == FeedbackSource::none || bits.size() != pos.size())
        throw std::invalid_argument("feedback_llrs: geometry mismatch");
    std::vector<double> prior(g.len_u(), 0.0);
    for (std::size_t i = 0; i < bits.size(); ++i) prior[pos[i]] = bits[i] ? -inf : inf;
    return prior;
}

namespace detail {

struct TrialContext {
    BitVec a_true;
    BitVec b_true;
    std::vector<double> ch_llr;
    SoftWord post1;
};

inline TrialContext first_decode(const FramePair& frame, const ChannelParams& params,
                                 const CodeSpec& code, RngStream& rng) {
    TrialContext ctx;
    ctx.a_true = frame.block_a.bits();
    ctx.b_true = frame.block_b.bits();
    const BitVec u = interleave(ctx.a_true, ctx.b_true, frame.geometry);
    const BitVec coded = encode(u, code);
    const auto received = transmit(modulate(coded), params, rng);
    ctx.ch_llr = channel_llr(received, params);
    ctx.post1 = decode_map(ctx.ch_llr, {}, code);
    return ctx;
}

inline std::pair<SoftWord, SoftWord> split_word(const SoftWord& u, const FrameGeometry& g) {
    auto [ab, bb] = deinterleave(u.bits, g);
    auto [al, bl] = deinterleave(u.llr, g);
    return {SoftWord{std::move(ab), std::move(al)}, SoftWord{std::move(bb), std::move(bl)}};
}

inline std::uint32_t errors(const BitVec& estimate, const BitVec& truth) {
    return static_cast<std::uint32_t>(hamming_distance(estimate, truth));
}

}  // namespace detail

inline StageTrace run_baseline(const FramePair& frame, const ChannelParams& params,
                               const CcfKey& /*key*/, const PipelineConfig& cfg, RngStream& rng) {
    const auto ctx = detail::first_decode(frame, params, cfg.code, rng);
    auto [wa, wb] = detail::split_word(ctx.post1, frame.geometry);
    StageTrace tr;
    tr.scheme = Scheme::baseline;
    tr.bits_total = static_cast<std::uint32_t>(frame.geometry.len_u());
    tr.errors_a_cd1 = detail::errors(wa.bits, ctx.a_true);
    tr.errors_b_cd1 = detail::errors(wb.bits, ctx.b_true);
    tr.errors_cd1 = tr.errors_a_cd1 + tr.errors_b_cd1;
    tr.errors_1sid = tr.errors_cd2 = tr.errors_2sid = tr.errors_cd1;
    return tr;
}

namespace detail {

inline StageTrace run_feedback_chain(const FramePair& frame, const ChannelParams& params,
                                     const CcfKey& key, const PipelineConfig& cfg, RngStream& rng,
                                     bool third_step, Scheme label) {
    const auto ctx = first_decode(frame, params, cfg.code, rng);
    auto [wa, wb] = split_word(ctx.post1, frame.geometry);

    StageTrace tr;
    tr.scheme = label;
    tr.bits_total = static_cast<std::uint32_t>(frame.geometry.len_u());
    tr.errors_a_cd1 = errors(wa.bits, ctx.a_true);
    tr.errors_b_cd1 = errors(wb.bits, ctx.b_true);
    tr.errors_cd1 = tr.errors_a_cd1 + tr.errors_b_cd1;

    const int tag_bits_a = static_cast<int>(frame.block_a.tag.size());
    const SidResult sid_a = soft_input_decrypt(wa, key, tag_bits_a, cfg.sid);
    tr.sid_attempts += sid_a.attempts_used;
    tr.sid_a_success = sid_a.ok();
    if (!sid_a.ok()) {
        // Step 2 is skipped; errors stay at the first-decoding count.
        tr.errors_1sid = tr.errors_cd2 = tr.errors_2sid = tr.errors_cd1;
        return tr;
    }

    const std::uint32_t err_corr_a = errors(sid_a.corrected->bits(), ctx.a_true);
    if (err_corr_a != 0) tr.collision = true;
    tr.errors_1sid = err_corr_a + tr.errors_b_cd1;

    const auto prior = feedback_llrs(*sid_a.corrected, FeedbackSource::block_a, frame.geometry);
    const SoftWord post2 = decode_map(ctx.ch_llr, prior, cfg.code);
    tr.redecode_ran = true;
    tr.feedback_from = FeedbackSource::block_a;
    auto [wa2, wb2] = split_word(post2, frame.geometry);
    const std::uint32_t err_a2 = errors(wa2.bits, ctx.a_true);
    const std::uint32_t err_b2 = errors(wb2.bits, ctx.b_true);
    tr.errors_a_cd2 = err_a2;
    tr.errors_b_cd2 = err_b2;
    tr.errors_cd2 = err_a2 + err_b2;
    tr.errors_2sid = tr.errors_cd2;

    if (third_step) {
        const int tag_bits_b = static_cast<int>(frame.block_b.tag.size());
        const SidResult sid_b = soft_input_decrypt(wb2, key, tag_bits_b, cfg.sid);
        tr.sid_attempts += sid_b.attempts_used;
        tr.sid_b_success = sid_b.ok();
        if (sid_b.ok()) {
            const std::uint32_t err_corr_b = errors(sid_b.corrected->bits(), ctx.b_true);
            if (err_corr_b != 0) tr.collision = true;
            tr.errors_2sid = err_a2 + err_corr_b;
        }
    }
    return tr;
}

}  // namespace detail

inline StageTrace run_feedback(const FramePair& frame, const ChannelParams& params,
                               const CcfKey& key, const PipelineConfig& cfg, RngStream& rng) {
    return detail::run_feedback_chain(frame, params, key, cfg, rng, false, Scheme::feedback);
}

inline StageTrace run_serial(const FramePair& frame, const ChannelParams& params,
                             const CcfKey& key, const PipelineConfig& cfg, RngStream& rng) {
    return detail::run_feedback_chain(frame, params, key, cfg, rng, true, Scheme::serial);
}

inline StageTrace run_parallel(const FramePair& frame, const ChannelParams& params,
                               const CcfKey& key, const PipelineConfig& cfg, RngStream& rng) {
    const auto ctx = detail::first_decode(frame, params, cfg.code, rng);
    auto [wa, wb] = detail::split_word(ctx.post1, frame.geometry);

    StageTrace tr;
    tr.scheme = Scheme::parallel;
    tr.bits_total = static_cast<std::uint32_t>(frame.geometry.len_u());
    tr.errors_a_cd1 = detail::errors(wa.bits, ctx.a_true);
    tr.errors_b_cd1 = detail::errors(wb.bits, ctx.b_true);
    tr.errors_cd1 = tr.errors_a_cd1 + tr.errors_b_cd1;

    const int tag_bits_a = static_cast<int>(frame.block_a.tag.size());
    const int tag_bits_b = static_cast<int>(frame.block_b.tag.size());

    // Step 1 runs on both blocks of the same first decoding.
    const SidResult sid_a = soft_input_decrypt(wa, key, tag_bits_a, cfg.sid);
    const SidResult sid_b = soft_input_decrypt(wb, key, tag_bits_b, cfg.sid);
    tr.sid_attempts += sid_a.attempts_used + sid_b.attempts_used;
    tr.sid_a_success = sid_a.ok();
    tr.sid_b_success = sid_b.ok();

    if (sid_a.ok() && sid_b.ok()) {
        // Both branches verified: all errors corrected, steps 2-3 not performed.
        const std::uint32_t err_a = detail::errors(sid_a.corrected->bits(), ctx.a_true);
        const std::uint32_t err_b = detail::errors(sid_b.corrected->bits(), ctx.b_true);
        if (err_a + err_b != 0) tr.collision = true;
        tr.errors_1sid = err_a + err_b;
        tr.errors_cd2 = tr.errors_2sid = tr.errors_1sid;
        return tr;
    }
    if (!sid_a.ok() && !sid_b.ok()) {
        tr.errors_1sid = tr.errors_cd2 = tr.errors_2sid = tr.errors_cd1;
        return tr;
    }

    // Exactly one branch verified; steps 2-3 run in that branch.
    const bool via_a = sid_a.ok();
    const SidResult& good = via_a ? sid_a : sid_b;
    const BitVec& good_truth = via_a ? ctx.a_true : ctx.b_true;
    const std::uint32_t err_corr = detail::errors(good.corrected->bits(), good_truth);
    if (err_corr != 0) tr.collision = true;
    tr.errors_1sid = err_corr + (via_a ? tr.errors_b_cd1 : tr.errors_a_cd1);

    tr.feedback_from = via_a ? FeedbackSource::block_a : FeedbackSource::block_b;
    const auto prior = feedback_llrs(*good.corrected, tr.feedback_from, frame.geometry);
    const SoftWord post2 = decode_map(ctx.ch_llr, prior, cfg.code);
    tr.redecode_ran = true;
    auto [wa2, wb2] = detail::split_word(post2, frame.geometry);
    tr.errors_a_cd2 = detail::errors(wa2.bits, ctx.a_true);
    tr.errors_b_cd2 = detail::errors(wb2.bits, ctx.b_true);
    const std::uint32_t err_good2 = via_a ? tr.errors_a_cd2 : tr.errors_b_cd2;
    tr.errors_cd2 = tr.errors_a_cd2 + tr.errors_b_cd2;
    tr.errors_2sid = tr.errors_cd2;

    const SoftWord& other_word = via_a ? wb2 : wa2;
    const SidResult sid_other =
        soft_input_decrypt(other_word, key, via_a ? tag_bits_b : tag_bits_a, cfg.sid);
    tr.sid_attempts += sid_other.attempts_used;
    if (via_a)
        tr.sid_b_success = sid_other.ok();
    else
        tr.sid_a_success = sid_other.ok();
    if (sid_other.ok()) {
        const std::uint32_t err_corr_other =
            detail::errors(sid_other.corrected->bits(), via_a ? ctx.b_true : ctx.a_true);
        if (err_corr_other != 0) tr.collision = true;
        tr.errors_2sid = err_good2 + err_corr_other;
    }
    return tr;
}

inline StageTrace run_trial(Scheme scheme, const FramePair& frame, const ChannelParams& params,
                            const CcfKey& key, const PipelineConfig& cfg, RngStream& rng) {
    switch (scheme) {
        case Scheme::baseline: return run_baseline(frame, params, key, cfg, rng);
        case Scheme::feedback: return run_feedback(frame, params, key, cfg, rng);
        case Scheme::serial: return run_serial(frame, params, key, cfg, rng);
        case Scheme::parallel: return run_parallel(frame, params, key, cfg, rng);
    }
    throw std::logic_error("run_trial: unhandled scheme");
}

}  // namespace sidlab
