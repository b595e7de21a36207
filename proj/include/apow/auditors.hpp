// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "apow/bytes.hpp"
#include "apow/pow.hpp"
#include "apow/signature.hpp"

namespace apow {

// Merkle commitment to the ordered set of eligible auditor public keys.
// Leaves and interior nodes are domain-separated; trees are padded to a
// power of two with a sentinel leaf so a proof's sibling sides encode the
// leaf index exactly.

namespace merkle_detail {

inline Digest leaf_hash(ByteSpan data) {
    ByteWriter w;
    w.u8(0x00);
    w.raw(data);
    return hash_digest(w.bytes());
}

inline Digest node_hash(const Digest& left, const Digest& right) {
    ByteWriter w;
    w.u8(0x01);
    w.raw(left.span());
    w.raw(right.span());
    return hash_digest(w.bytes());
}

inline Digest sentinel_leaf() { return leaf_hash(ByteSpan{}); }

} // namespace merkle_detail

struct MerkleStep {
    Digest sibling{};
    bool sibling_is_left = false;

    bool operator==(const MerkleStep&) const = default;
};

struct MerkleProof {
    Bytes leaf;                   // auditor public key bytes
    std::vector<MerkleStep> path; // leaf -> root
    uint32_t set_size = 0;        // published alongside the root by the pool
    Digest root{};

    // Leaf position recovered from the sibling sides, LSB at the leaf level.
    uint64_t index() const {
        uint64_t idx = 0;
        for (size_t level = 0; level < path.size(); ++level)
            if (path[level].sibling_is_left)
                idx |= uint64_t(1) << level;
        return idx;
    }

    void serialize(ByteWriter& w) const {
        w.var_bytes(ByteSpan(leaf.data(), leaf.size()));
        w.u16(static_cast<uint16_t>(path.size()));
        for (const auto& step : path) {
            w.raw(step.sibling.span());
            w.u8(step.sibling_is_left ? 1 : 0);
        }
        w.u32(set_size);
        w.raw(root.span());
    }

    bool operator==(const MerkleProof&) const = default;
};

// Recompute the root from the leaf and path and compare. Also rejects proofs
// whose shape is inconsistent with the claimed set size.
inline bool verify_merkle_proof(const MerkleProof& proof) {
    if (proof.set_size == 0)
        return false;
    size_t levels = 0;
    while ((uint64_t(1) << levels) < proof.set_size)
        ++levels;
    if (proof.path.size() != levels)
        return false;
    if (proof.index() >= proof.set_size)
        return false;
    Digest h = merkle_detail::leaf_hash(ByteSpan(proof.leaf.data(), proof.leaf.size()));
    for (const auto& step : proof.path)
        h = step.sibling_is_left ? merkle_detail::node_hash(step.sibling, h)
                                 : merkle_detail::node_hash(h, step.sibling);
    return h == proof.root;
}

class AuditorSet {
public:
    AuditorSet() = default;

    explicit AuditorSet(std::vector<PublicKey> members) : members_(std::move(members)) {
        if (members_.empty())
            throw std::invalid_argument("AuditorSet: empty member set");
        build_tree();
    }

    size_t size() const { return members_.size(); }
    const std::vector<PublicKey>& members() const { return members_; }
    const PublicKey& member(size_t i) const { return members_.at(i); }
    const Digest& root() const { return root_; }

    MerkleProof proof_for(size_t index) const {
        if (index >= members_.size())
            throw std::out_of_range("AuditorSet::proof_for: index out of range");
        MerkleProof proof;
        proof.leaf.assign(members_[index].bytes.begin(), members_[index].bytes.end());
        proof.set_size = static_cast<uint32_t>(members_.size());
        proof.root = root_;
        size_t pos = index;
        for (size_t level = 0; level + 1 < layers_.size(); ++level) {
            size_t sib = pos ^ 1;
            proof.path.push_back({layers_[level][sib], (sib & 1) == 0});
            pos >>= 1;
        }
        return proof;
    }

private:
    void build_tree() {
        size_t padded = 1;
        while (padded < members_.size())
            padded <<= 1;
        std::vector<Digest> layer;
        layer.reserve(padded);
        for (const auto& pk : members_)
            layer.push_back(merkle_detail::leaf_hash(pk.span()));
        layer.resize(padded, merkle_detail::sentinel_leaf());
        layers_.clear();
        layers_.push_back(layer);
        while (layer.size() > 1) {
            std::vector<Digest> next;
            next.reserve(layer.size() / 2);
            for (size_t i = 0; i < layer.size(); i += 2)
                next.push_back(merkle_detail::node_hash(layer[i], layer[i + 1]));
            layers_.push_back(next);
            layer = std::move(next);
        }
        root_ = layers_.back()[0];
    }

    std::vector<PublicKey> members_;
    std::vector<std::vector<Digest>> layers_;
    Digest root_{};
};

// CSPRNG auditor index: SHA-256 in counter mode keyed by the block id, with
// rejection sampling so every index is drawn uniformly.
inline uint64_t select_auditor_index(const Digest& block_id, uint64_t set_size) {
    if (set_size == 0)
        throw std::invalid_argument("select_auditor_index: empty set");
    uint64_t limit = UINT64_MAX - UINT64_MAX % set_size;
    for (uint64_t counter = 0;; ++counter) {
        ByteWriter w;
        w.raw(block_id.span());
        w.u64(counter);
        auto h = sha256(ByteSpan(w.bytes().data(), w.bytes().size()));
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v = v << 8 | h[i];
        if (v < limit)
            return v % set_size;
    }
}

struct AuditorSelection {
    uint64_t index = 0;
    PublicKey key;
    MerkleProof proof;
};

// Deterministic selection seeded by a block id already on the chain; anyone
// holding the member list can recompute and verify it.
inline AuditorSelection select_auditor(const AuditorSet& set, const Digest& block_id) {
    uint64_t idx = select_auditor_index(block_id, set.size());
    return AuditorSelection{idx, set.member(idx), set.proof_for(idx)};
}

} // namespace apow
