// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "apow/header.hpp"
#include "apow/pow.hpp"

namespace apow {

// Inclusive nonce interval [start, end].
struct NonceRange {
    uint64_t start = 0;
    uint64_t end = 0;

    NonceRange() = default;
    NonceRange(uint64_t s, uint64_t e) : start(s), end(e) {
        if (s > e)
            throw std::invalid_argument("NonceRange: start > end");
    }

    uint64_t length() const { return end - start + 1; }
    bool contains(uint64_t n) const { return n >= start && n <= end; }
    bool operator==(const NonceRange&) const = default;
};

struct ScanHit {
    uint64_t nonce = 0;
    Digest digest{};

    bool operator==(const ScanHit&) const = default;
};

// Reusable message buffer: the serialized template stays fixed while the
// trailing 64-bit nonce is patched per attempt.
class MessageBuffer {
public:
    explicit MessageBuffer(const TemplateHeader& g) : buf_(embed_message(g, 0)) {}

    ByteSpan with_nonce(uint64_t n) {
        size_t off = buf_.size() - 8;
        for (int i = 0; i < 8; ++i)
            buf_[off + i] = static_cast<uint8_t>(n >> (56 - 8 * i));
        return ByteSpan(buf_.data(), buf_.size());
    }

private:
    Bytes buf_;
};

// Exhaustive single-pattern scan: every nonce in r (ascending) whose digest
// matches p.
inline std::vector<ScanHit> scan_pattern(const TemplateHeader& g, const NonceRange& r,
                                         const BitPattern& p,
                                         HashKind kind = HashKind::Sha256d) {
    std::vector<ScanHit> hits;
    MessageBuffer msg(g);
    for (uint64_t n = r.start;; ++n) {
        Digest x = hash_digest(msg.with_nonce(n), kind);
        if (matches_prefix(x, p))
            hits.push_back({n, x});
        if (n == r.end)
            break;
    }
    return hits;
}

// Normal mining: the work condition X = z || y with z the d-bit zero string.
inline std::vector<ScanHit> mine_scan(const TemplateHeader& g, const NonceRange& r, size_t d,
                                      HashKind kind = HashKind::Sha256d) {
    return scan_pattern(g, r, BitPattern::zeros(d), kind);
}

struct VScanResult {
    std::vector<ScanHit> share_hits; // b2 matches: productive work
    std::vector<ScanHit> audit_hits; // b1 matches: audit evidence

    bool operator==(const VScanResult&) const = default;
};

// V-mining: one pass over r testing each digest against both patterns.
// b1 is the audit predicate (zeros for first-level audits, the audited
// v-miner's b2 for recursive audits); b2 is the productive predicate derived
// from the previous block id. When b1 == b2 a hit lands in both lists.
inline VScanResult vmine_scan(const TemplateHeader& g, const NonceRange& r,
                              const BitPattern& b1, const BitPattern& b2,
                              HashKind kind = HashKind::Sha256d) {
    if (b1.size() != b2.size())
        throw std::invalid_argument("vmine_scan: b1 and b2 must have equal length");
    VScanResult out;
    MessageBuffer msg(g);
    for (uint64_t n = r.start;; ++n) {
        Digest x = hash_digest(msg.with_nonce(n), kind);
        if (matches_prefix(x, b2))
            out.share_hits.push_back({n, x});
        if (matches_prefix(x, b1))
            out.audit_hits.push_back({n, x});
        if (n == r.end)
            break;
    }
    return out;
}

// First nonce in r matching p, if any. Convenience for tests and block
// construction; equivalent to scan_pattern(...).front().
inline std::optional<ScanHit> find_first(const TemplateHeader& g, const NonceRange& r,
                                         const BitPattern& p,
                                         HashKind kind = HashKind::Sha256d) {
    MessageBuffer msg(g);
    for (uint64_t n = r.start;; ++n) {
        Digest x = hash_digest(msg.with_nonce(n), kind);
        if (matches_prefix(x, p))
            return ScanHit{n, x};
        if (n == r.end)
            break;
    }
    return std::nullopt;
}

} // namespace apow
