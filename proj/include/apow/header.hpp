// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "apow/bytes.hpp"
#include "apow/pow.hpp"

namespace apow {

// Block template header G_i. The nonce is not part of the template; miners
// append it when building the message to hash. poolAddress receives v-block
// rewards; auditorsRoot commits to the eligible auditor set; lastBlock
// optionally references the pool's previous canonical block for coinbase-
// style reward replication.
struct TemplateHeader {
    uint32_t version = 1;
    Digest parent{};
    Digest txroot{};
    uint64_t height = 0;
    uint64_t time = 0;
    uint16_t difficulty = 0; // leading pattern bits d
    std::string pool_address;
    std::optional<Digest> auditors_root;
    std::optional<Digest> last_block;

    bool operator==(const TemplateHeader&) const = default;

    // Canonical layout: fixed-order fields, big-endian integers,
    // length-prefixed strings, presence byte ahead of optional digests.
    void serialize(ByteWriter& w) const {
        w.u32(version);
        w.raw(parent.span());
        w.raw(txroot.span());
        w.u64(height);
        w.u64(time);
        w.u16(difficulty);
        w.var_string(pool_address);
        w.u8(auditors_root ? 1 : 0);
        if (auditors_root)
            w.raw(auditors_root->span());
        w.u8(last_block ? 1 : 0);
        if (last_block)
            w.raw(last_block->span());
    }

    Bytes serialized() const {
        ByteWriter w;
        serialize(w);
        return w.take();
    }
};

// Identifies a template independent of any nonce; used as the key for work
// units and share bookkeeping.
using TemplateId = Digest;

inline TemplateId template_id(const TemplateHeader& g, HashKind kind = HashKind::Sha256d) {
    return hash_digest(g.serialized(), kind);
}

// M := G || n with the nonce appended as l_n big-endian bits.
inline Bytes embed_message(const TemplateHeader& g, uint64_t nonce) {
    static_assert(kNonceBits == 64, "nonce serialization assumes 64-bit nonces");
    ByteWriter w;
    g.serialize(w);
    w.u64(nonce);
    return w.take();
}

} // namespace apow
