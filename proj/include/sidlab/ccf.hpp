#pragma once

// Cryptographic check function: truncated HMAC-SHA-256 over bit sequences,
// and the SID block (message || check value) it protects.
//
// Bit packing is normative: message bits are packed MSB-first into bytes and
// prefixed with an 8-byte big-endian bit count, so messages of different bit
// lengths can never collide through zero padding. The tag is the leading n
// bits of the MAC, taken MSB-first from the digest.

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "sidlab/bits.hpp"

namespace sidlab {

namespace detail {

// FIPS 180-4 SHA-256.
class Sha256 {
  public:
    Sha256() { reset(); }

    void reset() {
        h_ = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
              0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
        buf_len_ = 0;
        total_ = 0;
    }

    void update(const std::uint8_t* data, std::size_t len) {
        total_ += len;
        while (len > 0) {
            const std::size_t take = std::min(len, sizeof(buf_) - buf_len_);
            std::memcpy(buf_ + buf_len_, data, take);
            buf_len_ += take;
            data += take;
            len -= take;
            if (buf_len_ == sizeof(buf_)) {
                compress(buf_);
                buf_len_ = 0;
            }
        }
    }

    std::array<std::uint8_t, 32> finish() {
        const std::uint64_t bit_len = total_ * 8;
        const std::uint8_t pad = 0x80;
        update(&pad, 1);
        const std::uint8_t zero = 0x00;
        while (buf_len_ != 56) update(&zero, 1);
        std::uint8_t len_be[8];
        for (int i = 0; i < 8; ++i)
            len_be[i] = static_cast<std::uint8_t>(bit_len >> (56 - 8 * i));
        update(len_be, 8);
        std::array<std::uint8_t, 32> digest;
        for (int i = 0; i < 8; ++i) {
            digest[4 * i + 0] = static_cast<std::uint8_t>(h_[i] >> 24);
            digest[4 * i + 1] = static_cast<std::uint8_t>(h_[i] >> 16);
            digest[4 * i + 2] = static_cast<std::uint8_t>(h_[i] >> 8);
            digest[4 * i + 3] = static_cast<std::uint8_t>(h_[i]);
        }
        reset();
        return digest;
    }

  private:
    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void compress(const std::uint8_t* block) {
        static constexpr std::uint32_t k[64] = {
            0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu, 0x59f111f1u,
            0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u, 0x243185beu, 0x550c7dc3u,
            0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u, 0xc19bf174u, 0xe49b69c1u, 0xefbe4786u,
            0x0fc19dc6u, 0x240ca1ccu, 0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau,
            0x983e5152u, 0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
            0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu, 0x53380d13u,
            0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u, 0xa2bfe8a1u, 0xa81a664bu,
            0xc24b8b70u, 0xc76c51a3u, 0xd192e819u, 0xd6990624u, 0xf40e3585u, 0x106aa070u,
            0x19a4c116u, 0x1e376c08u, 0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au,
            0x5b9cca4fu, 0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
            0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = static_cast<std::uint32_t>(block[4 * i]) << 24 |
                   static_cast<std::uint32_t>(block[4 * i + 1]) << 16 |
                   static_cast<std::uint32_t>(block[4 * i + 2]) << 8 |
                   static_cast<std::uint32_t>(block[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3];
        std::uint32_t e = h_[4], f = h_[5], g = h_[6], h = h_[7];
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const std::uint32_t ch = (e & f) ^ (~e & g);
            const std::uint32_t t1 = h + s1 + ch + k[i] + w[i];
            const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const std::uint32_t t2 = s0 + maj;
            h = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        h_[0] += a;
        h_[1] += b;
        h_[2] += c;
        h_[3] += d;
        h_[4] += e;
        h_[5] += f;
        h_[6] += g;
        h_[7] += h;
    }

    std::array<std::uint32_t, 8> h_;
    std::uint8_t buf_[64];
    std::size_t buf_len_ = 0;
    std::uint64_t total_ = 0;
};

// RFC 2104 HMAC over SHA-256.
inline std::array<std::uint8_t, 32> hmac_sha256(const std::vector<std::uint8_t>& key,
                                                const std::uint8_t* msg, std::size_t msg_len) {
    std::array<std::uint8_t, 64> k{};
    if (key.size() > 64) {
        Sha256 kh;
        kh.update(key.data(), key.size());
        const auto kd = kh.finish();
        std::memcpy(k.data(), kd.data(), kd.size());
    } else {
        std::memcpy(k.data(), key.data(), key.size());
    }
    std::array<std::uint8_t, 64> ipad, opad;
    for (int i = 0; i < 64; ++i) {
        ipad[i] = static_cast<std::uint8_t>(k[i] ^ 0x36);
        opad[i] = static_cast<std::uint8_t>(k[i] ^ 0x5c);
    }
    Sha256 inner;
    inner.update(ipad.data(), ipad.size());
    inner.update(msg, msg_len);
    const auto inner_digest = inner.finish();
    Sha256 outer;
    outer.update(opad.data(), opad.size());
    outer.update(inner_digest.data(), inner_digest.size());
    return outer.finish();
}

}  // namespace detail

struct CcfKey {
    std::vector<std::uint8_t> bytes;

    static CcfKey from_hex(const std::string& hex) {
        CcfKey k{hex_to_bytes(hex)};
        k.validate();
        return k;
    }

    void validate() const {
        if (bytes.size() < 16) throw std::invalid_argument("CcfKey: key shorter than 16 bytes");
    }
};

inline constexpr int kMinTagBits = 8;
inline constexpr int kMaxTagBits = 256;

// Leading n bits of HMAC-SHA-256(key, bit-count header || packed message).
inline BitVec tag(const BitVec& message, const CcfKey& key, int tag_bits) {
    if (tag_bits < kMinTagBits || tag_bits > kMaxTagBits)
        throw std::invalid_argument("tag: tag length out of range");
    key.validate();
    std::vector<std::uint8_t> buf;
    buf.reserve(8 + (message.size() + 7) / 8);
    const std::uint64_t n = message.size();
    for (int i = 7; i >= 0; --i) buf.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    const auto packed = pack_msb_first(message);
    buf.insert(buf.end(), packed.begin(), packed.end());
    const auto mac = detail::hmac_sha256(key.bytes, buf.data(), buf.size());
    BitVec out(static_cast<std::size_t>(tag_bits));
    for (int i = 0; i < tag_bits; ++i)
        out[static_cast<std::size_t>(i)] = (mac[static_cast<std::size_t>(i / 8)] >> (7 - i % 8)) & 1;
    return out;
}

// A message concatenated with its cryptographic check value; the unit SID
// verifies and corrects.
struct SIDBlock {
    BitVec message;
    BitVec tag;

    std::size_t size() const { return message.size() + tag.size(); }

    BitVec bits() const {
        BitVec all;
        all.reserve(size());
        all.insert(all.end(), message.begin(), message.end());
        all.insert(all.end(), tag.begin(), tag.end());
        return all;
    }

    static SIDBlock from_bits(const BitVec& all, int tag_bits) {
        if (tag_bits < kMinTagBits || tag_bits > kMaxTagBits)
            throw std::invalid_argument("SIDBlock: tag length out of range");
        if (all.size() < static_cast<std::size_t>(tag_bits))
            throw std::invalid_argument("SIDBlock: fewer bits than the tag length");
        const std::size_t m = all.size() - static_cast<std::size_t>(tag_bits);
        SIDBlock b;
        b.message.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m));
        b.tag.assign(all.begin() + static_cast<std::ptrdiff_t>(m), all.end());
        return b;
    }
};

inline SIDBlock make_sid_block(const BitVec& message, const CcfKey& key, int tag_bits) {
    SIDBlock b;
    b.message = message;
    b.tag = tag(message, key, tag_bits);
    return b;
}

inline bool verify(const SIDBlock& block, const CcfKey& key) {
    return block.tag == tag(block.message, key, static_cast<int>(block.tag.size()));
}

}  // namespace sidlab
