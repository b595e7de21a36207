// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "apow/bytes.hpp"
#include "apow/sha256.hpp"

namespace apow {

// Output length of the hash function H, in bits.
inline constexpr size_t kDigestBits = 256;
inline constexpr size_t kDigestBytes = kDigestBits / 8;

// Nonce width l_n. A single unified nonce field wide enough that desk-scale
// scans never exhaust it.
inline constexpr size_t kNonceBits = 64;

// H is double SHA-256 by default; single SHA-256 is available when raw scan
// throughput matters more than Bitcoin parity.
enum class HashKind : uint8_t { Sha256d = 0, Sha256 = 1 };

// A λ-bit hash output. Immutable by convention: produced by hash_digest and
// never mutated afterwards.
struct Digest {
    std::array<uint8_t, kDigestBytes> bytes{};

    auto operator<=>(const Digest&) const = default;

    // Bit i, counting from the most significant bit of byte 0.
    bool bit(size_t i) const {
        return (bytes[i / 8] >> (7 - i % 8)) & 1;
    }

    std::string hex() const { return to_hex(ByteSpan(bytes.data(), bytes.size())); }

    static Digest from_hex(std::string_view s) {
        Bytes raw = apow::from_hex(s);
        if (raw.size() != kDigestBytes)
            throw std::invalid_argument("Digest::from_hex: need 32 bytes");
        Digest d;
        std::copy(raw.begin(), raw.end(), d.bytes.begin());
        return d;
    }

    ByteSpan span() const { return ByteSpan(bytes.data(), bytes.size()); }
};

inline Digest hash_digest(ByteSpan message, HashKind kind = HashKind::Sha256d) {
    Digest d;
    d.bytes = (kind == HashKind::Sha256d) ? sha256d(message) : sha256(message);
    return d;
}

// A prefix pattern of d bits, 0 <= d <= λ. Stored MSB-first with unused tail
// bits of the last byte held at zero so equality is plain byte equality.
class BitPattern {
public:
    BitPattern() = default;

    static BitPattern zeros(size_t d) {
        check_len(d);
        BitPattern p;
        p.nbits_ = d;
        return p;
    }

    // First d bits of a digest.
    static BitPattern prefix_of(const Digest& x, size_t d) {
        check_len(d);
        BitPattern p;
        p.nbits_ = d;
        size_t full = d / 8;
        for (size_t i = 0; i < full; ++i)
            p.bits_[i] = x.bytes[i];
        if (d % 8 != 0)
            p.bits_[full] = x.bytes[full] & high_mask(d % 8);
        return p;
    }

    // The d-bit big-endian representation of value; requires d <= 64 and
    // value < 2^d.
    static BitPattern from_value(uint64_t value, size_t d) {
        if (d > 64)
            throw std::invalid_argument("BitPattern::from_value: d > 64");
        if (d < 64 && value >> d)
            throw std::invalid_argument("BitPattern::from_value: value needs more than d bits");
        BitPattern p;
        p.nbits_ = d;
        for (size_t i = 0; i < d; ++i) {
            if ((value >> (d - 1 - i)) & 1)
                p.bits_[i / 8] |= uint8_t(1u << (7 - i % 8));
        }
        return p;
    }

    size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool bit(size_t i) const {
        return (bits_[i / 8] >> (7 - i % 8)) & 1;
    }

    uint8_t byte(size_t i) const { return bits_[i]; }

    // Integer value of the pattern; requires size() <= 64.
    uint64_t to_value() const {
        if (nbits_ > 64)
            throw std::logic_error("BitPattern::to_value: pattern longer than 64 bits");
        uint64_t v = 0;
        for (size_t i = 0; i < nbits_; ++i)
            v = v << 1 | uint64_t(bit(i));
        return v;
    }

    // Leading k bits of this pattern; used for share-difficulty checks.
    BitPattern truncated(size_t k) const {
        if (k > nbits_)
            throw std::invalid_argument("BitPattern::truncated: k exceeds pattern length");
        BitPattern p;
        p.nbits_ = k;
        size_t full = k / 8;
        for (size_t i = 0; i < full; ++i)
            p.bits_[i] = bits_[i];
        if (k % 8 != 0)
            p.bits_[full] = bits_[full] & high_mask(k % 8);
        return p;
    }

    bool operator==(const BitPattern& o) const {
        return nbits_ == o.nbits_ && bits_ == o.bits_;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(nbits_);
        for (size_t i = 0; i < nbits_; ++i)
            s.push_back(bit(i) ? '1' : '0');
        return s;
    }

    void serialize(ByteWriter& w) const {
        w.u16(static_cast<uint16_t>(nbits_));
        w.raw(ByteSpan(bits_.data(), (nbits_ + 7) / 8));
    }

private:
    static void check_len(size_t d) {
        if (d > kDigestBits)
            throw std::invalid_argument("BitPattern: length exceeds digest width");
    }
    static uint8_t high_mask(size_t bits) {
        return static_cast<uint8_t>(0xff00u >> bits);
    }

    size_t nbits_ = 0;
    std::array<uint8_t, kDigestBytes> bits_{};
};

// True iff the first p.size() bits of x equal p. The empty pattern matches
// everything.
inline bool matches_prefix(const Digest& x, const BitPattern& p) {
    size_t d = p.size();
    if (d > kDigestBits)
        throw std::invalid_argument("matches_prefix: pattern longer than digest");
    size_t full = d / 8;
    for (size_t i = 0; i < full; ++i)
        if (x.bytes[i] != p.byte(i))
            return false;
    for (size_t i = full * 8; i < d; ++i)
        if (x.bit(i) != p.bit(i))
            return false;
    return true;
}

// First d bits of x as an unsigned integer; requires d <= 64.
inline uint64_t prefix_value(const Digest& x, size_t d) {
    if (d > 64)
        throw std::invalid_argument("prefix_value: d > 64");
    uint64_t v = 0;
    for (size_t i = 0; i < d; ++i)
        v = v << 1 | uint64_t(x.bit(i));
    return v;
}

// Fine-grained difficulty: maximum absolute distance u between the d-bit
// truncated digest and the target pattern, interpreted as d-bit unsigned
// integers. No wraparound. Disabled targets fall back to exact prefix match.
struct FineTarget {
    uint64_t max_distance = 0;
    bool enabled = false;

    static FineTarget exact() { return FineTarget{}; }
    static FineTarget within(uint64_t u) { return FineTarget{u, true}; }
};

inline bool fine_distance_ok(const Digest& x, const BitPattern& p, const FineTarget& t) {
    if (!t.enabled)
        return matches_prefix(x, p);
    size_t d = p.size();
    if (d == 0)
        throw std::invalid_argument("fine_distance_ok: enabled target needs d > 0");
    if (d > 64)
        throw std::invalid_argument("fine_distance_ok: d > 64");
    uint64_t got = prefix_value(x, d);
    uint64_t want = p.to_value();
    uint64_t dist = got > want ? got - want : want - got;
    return dist <= t.max_distance;
}

// b2 = pref_d(H(B_ID(j-1))): the productive v-mining pattern for height j
// is the d-bit prefix of the hash of the previous block's id. Pinning b2 to
// a block id that did not exist during round i prevents precomputed digest
// tables from matching it.
inline BitPattern derive_b2(const Digest& prev_block_id, size_t d,
                            HashKind kind = HashKind::Sha256d) {
    if (d > kDigestBits)
        throw std::invalid_argument("derive_b2: d exceeds digest width");
    return BitPattern::prefix_of(hash_digest(prev_block_id.span(), kind), d);
}

} // namespace apow
