// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "apow/auditors.hpp"
#include "apow/header.hpp"
#include "apow/mining.hpp"
#include "apow/pow.hpp"
#include "apow/signature.hpp"

namespace apow {

enum class ValidationError {
    None = 0,
    // normal blocks
    BadParent,
    BadHeight,
    BadPoW,
    // sealed v-blocks (scheme 1)
    ConsecutiveVBlock,
    DepthExceeded,
    WrongB2,
    BadAuditedTemplate,
    BadNewTemplate,
    BadSeal,
    BadAuditorProof,
    // scheme 2c transactions
    BadVersion,
    BadDifficulty,
    BadPoolAddress,
    HeightQuotaExceeded,
};

inline const char* to_string(ValidationError e) {
    switch (e) {
    case ValidationError::None: return "ok";
    case ValidationError::BadParent: return "BadParent";
    case ValidationError::BadHeight: return "BadHeight";
    case ValidationError::BadPoW: return "BadPoW";
    case ValidationError::ConsecutiveVBlock: return "ConsecutiveVBlock";
    case ValidationError::DepthExceeded: return "DepthExceeded";
    case ValidationError::WrongB2: return "WrongB2";
    case ValidationError::BadAuditedTemplate: return "BadAuditedTemplate";
    case ValidationError::BadNewTemplate: return "BadNewTemplate";
    case ValidationError::BadSeal: return "BadSeal";
    case ValidationError::BadAuditorProof: return "BadAuditorProof";
    case ValidationError::BadVersion: return "BadVersion";
    case ValidationError::BadDifficulty: return "BadDifficulty";
    case ValidationError::BadPoolAddress: return "BadPoolAddress";
    case ValidationError::HeightQuotaExceeded: return "HeightQuotaExceeded";
    }
    return "unknown";
}

// How a v-block is bound to its reward recipient.
//   PoolAddress      — the audited template's poolAddress collects the reward.
//   AuditorCommittee — templates commit to an auditorsRoot; the v-block must
//                      prove the sealer is the CSPRNG-selected auditor.
//   SignatureStub    — stand-in for the zero-knowledge variant: same call
//                      surface, binding by seal only, no poolAddress needed.
enum class Attribution : uint8_t { PoolAddress = 1, AuditorCommittee = 2, SignatureStub = 3 };

struct ChainParams {
    uint16_t difficulty = 8;             // d: leading pattern bits per block
    uint32_t max_audit_depth = 6;        // D
    bool allow_recursive_audit = true;   // v-blocks auditing v-blocks
    uint32_t max_recursive_depth = 2;    // D2
    uint32_t max_inclusion_depth = 3;    // D_I, scheme 2c
    bool immediate_inclusion = false;    // v-block only at j == i+1
    uint32_t max_vblocks_per_height = 2; // scheme 2c quota
    bool vblock_contributes_work = true;
    uint32_t version = 1;
    HashKind hash_kind = HashKind::Sha256d;
    Attribution attribution = Attribution::PoolAddress;

    void check() const {
        if (max_audit_depth < 1 || max_recursive_depth < 1 || max_inclusion_depth < 1 ||
            max_vblocks_per_height < 1)
            throw std::invalid_argument("ChainParams: depth and quota bounds must be >= 1");
        if (difficulty > kNonceBits)
            throw std::invalid_argument("ChainParams: difficulty beyond desk scale");
    }
};

struct Block {
    TemplateHeader header;
    uint64_t nonce = 0;

    bool operator==(const Block&) const = default;
};

inline Digest block_id(const Block& b, HashKind kind = HashKind::Sha256d) {
    return hash_digest(embed_message(b.header, b.nonce), kind);
}

// Sealed v-block: the tuple (i, G_i, n, j, G_j, σ) plus the sealer's key and,
// under committee attribution, a Merkle membership proof.
struct VBlock {
    uint64_t audited_height = 0;    // round whose search space was re-scanned
    TemplateHeader audited_template;
    uint64_t nonce = 0;
    uint64_t new_height = 0;        // j
    TemplateHeader new_template;    // G_j
    PublicKey signer;
    Signature seal;
    std::optional<MerkleProof> auditor_proof;

    bool operator==(const VBlock&) const = default;
};

inline Bytes vblock_signing_bytes(const VBlock& v) {
    ByteWriter w;
    w.u64(v.audited_height);
    v.audited_template.serialize(w);
    w.u64(v.nonce);
    w.u64(v.new_height);
    v.new_template.serialize(w);
    w.raw(v.signer.span());
    return w.take();
}

inline Bytes vblock_serialized(const VBlock& v) {
    ByteWriter w;
    w.raw(ByteSpan(vblock_signing_bytes(v)));
    w.raw(v.seal.span());
    w.u8(v.auditor_proof ? 1 : 0);
    if (v.auditor_proof)
        v.auditor_proof->serialize(w);
    return w.take();
}

inline Digest vblock_id(const VBlock& v, HashKind kind = HashKind::Sha256d) {
    return hash_digest(vblock_serialized(v), kind);
}

inline VBlock seal_vblock(uint64_t audited_height, TemplateHeader audited_template,
                          uint64_t nonce, uint64_t new_height, TemplateHeader new_template,
                          const KeyPair& keys,
                          std::optional<MerkleProof> proof = std::nullopt) {
    VBlock v;
    v.audited_height = audited_height;
    v.audited_template = std::move(audited_template);
    v.nonce = nonce;
    v.new_height = new_height;
    v.new_template = std::move(new_template);
    v.signer = keys.pub;
    v.auditor_proof = std::move(proof);
    v.seal = sign_detached(ByteSpan(vblock_signing_bytes(v)), keys.sec);
    return v;
}

// Where the v-block reward is paid under pool-address attribution.
inline const std::string& vblock_payout_address(const VBlock& v) {
    return v.audited_template.pool_address;
}

using ChainItem = std::variant<Block, VBlock>;

struct ChainEntry {
    ChainItem item;
    Digest id{};
    uint64_t height = 0;
};

inline bool is_vblock(const ChainEntry& e) { return std::holds_alternative<VBlock>(e.item); }

// Header whose fields describe the entry's slot (for v-blocks that is G_j).
inline const TemplateHeader& slot_header(const ChainEntry& e) {
    if (auto* b = std::get_if<Block>(&e.item))
        return b->header;
    return std::get<VBlock>(e.item).new_template;
}

// Append-only canonical chain. Validation is a pure read; append validates
// and extends. Scheme 2c v-block transactions are tracked in a side count so
// the per-height quota can be enforced.
class ChainState {
public:
    ChainState() = default;

    // Genesis enters without a proof-of-work check and contributes no work.
    static ChainState with_genesis(const TemplateHeader& genesis_template,
                                   HashKind kind = HashKind::Sha256d) {
        if (genesis_template.height != 0)
            throw std::invalid_argument("genesis template must have height 0");
        ChainState c;
        Block g{genesis_template, 0};
        c.entries_.push_back({g, block_id(g, kind), 0});
        return c;
    }

    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    uint64_t tip_height() const { return entries_.back().height; }
    const ChainEntry& tip() const { return entries_.back(); }
    const ChainEntry& at(uint64_t height) const { return entries_.at(height); }
    const Digest& id_at(uint64_t height) const { return entries_.at(height).id; }
    unsigned __int128 cumulative_work() const { return work_; }

    ValidationError validate_block(const Block& b, const ChainParams& params) const {
        if (b.header.parent != tip().id)
            return ValidationError::BadParent;
        if (b.header.height != tip_height() + 1)
            return ValidationError::BadHeight;
        if (b.header.difficulty != params.difficulty)
            return ValidationError::BadPoW;
        Digest x = hash_digest(embed_message(b.header, b.nonce), params.hash_kind);
        if (!matches_prefix(x, BitPattern::zeros(params.difficulty)))
            return ValidationError::BadPoW;
        return ValidationError::None;
    }

    ValidationError validate_vblock(const VBlock& v, const ChainParams& params) const {
        // No two consecutive v-blocks: every v-block is followed by a
        // regular PoW block, so it may not extend a v-block tip.
        if (is_vblock(tip()))
            return ValidationError::ConsecutiveVBlock;

        // G_j must be a well-formed normal header for height j = tip+1,
        // minus the PoW requirement; its poolAddress is ignored.
        uint64_t j = tip_height() + 1;
        if (v.new_height != j || v.new_template.height != j ||
            v.new_template.parent != tip().id ||
            v.new_template.difficulty != params.difficulty ||
            v.new_template.version != params.version)
            return ValidationError::BadNewTemplate;

        // The audited round must exist strictly below j.
        if (v.audited_height >= j)
            return ValidationError::DepthExceeded;
        if (v.audited_height == 0)
            return ValidationError::BadAuditedTemplate; // genesis has no search space
        const ChainEntry& audited = at(v.audited_height);
        uint64_t gap = j - v.audited_height;
        if (is_vblock(audited)) {
            // Recursive audit: the re-scanned template is one the audited
            // v-miner itself was scanning, so it sits below that round.
            if (!params.allow_recursive_audit || gap > params.max_recursive_depth)
                return ValidationError::DepthExceeded;
            if (v.audited_template.height >= v.audited_height)
                return ValidationError::BadAuditedTemplate;
        } else {
            if (gap > params.max_audit_depth)
                return ValidationError::DepthExceeded;
            if (params.immediate_inclusion && gap != 1)
                return ValidationError::DepthExceeded;
            if (v.audited_template.height != v.audited_height)
                return ValidationError::BadAuditedTemplate;
        }

        // The audited template must satisfy a header's conditions for its
        // own height, except for its modified PoW.
        ValidationError te = check_audited_template(v.audited_template, params);
        if (te != ValidationError::None)
            return te;

        // The nonce must produce the expected PoW against b2 derived from
        // the block at height j-1, at the mandated difficulty.
        BitPattern b2 = derive_b2(tip().id, params.difficulty, params.hash_kind);
        Digest x = hash_digest(embed_message(v.audited_template, v.nonce), params.hash_kind);
        if (!matches_prefix(x, b2))
            return ValidationError::WrongB2;

        if (!verify_detached(ByteSpan(vblock_signing_bytes(v)), v.seal, v.signer))
            return ValidationError::BadSeal;

        if (params.attribution == Attribution::AuditorCommittee) {
            ValidationError ae = check_auditor_proof(v);
            if (ae != ValidationError::None)
                return ae;
        }
        return ValidationError::None;
    }

    ValidationError append(const Block& b, const ChainParams& params) {
        ValidationError e = validate_block(b, params);
        if (e != ValidationError::None)
            return e;
        entries_.push_back({b, block_id(b, params.hash_kind), b.header.height});
        work_ += work_of(params.difficulty);
        return ValidationError::None;
    }

    ValidationError append(const VBlock& v, const ChainParams& params) {
        ValidationError e = validate_vblock(v, params);
        if (e != ValidationError::None)
            return e;
        entries_.push_back({v, vblock_id(v, params.hash_kind), v.new_height});
        if (params.vblock_contributes_work)
            work_ += work_of(params.difficulty);
        return ValidationError::None;
    }

    // Scheme 2c: an empty v-block carried inside a transaction. The payload
    // is the audited template, the solving nonce and the claimed v-height j
    // whose predecessor seeds b2.
    struct Scheme2cPayload {
        TemplateHeader audited_template;
        uint64_t nonce = 0;
        uint64_t vheight = 0; // j
    };

    ValidationError validate_scheme2c(const Scheme2cPayload& p, uint64_t inclusion_height,
                                      const ChainParams& params) const {
        if (inclusion_height > tip_height() + 1)
            throw std::invalid_argument("scheme2c: inclusion height beyond tip+1");
        const TemplateHeader& g = p.audited_template;
        // 1. version
        if (g.version != params.version)
            return ValidationError::BadVersion;
        // 2. parent anchoring and inclusion depth
        if (p.vheight == 0 || p.vheight - 1 > tip_height())
            return ValidationError::BadParent;
        if (g.height == 0 || g.height > tip_height() ||
            g.parent != id_at(g.height - 1))
            return ValidationError::BadParent;
        if (inclusion_height <= p.vheight ||
            inclusion_height - p.vheight > params.max_inclusion_depth)
            return ValidationError::DepthExceeded;
        // 3. height relationship: the v-height follows the audited round
        //    within the audit window
        if (p.vheight <= g.height || p.vheight - g.height > params.max_audit_depth)
            return ValidationError::BadHeight;
        // 4. time is ignored
        // 5. difficulty must match the audited round's requirement
        if (g.difficulty != params.difficulty)
            return ValidationError::BadDifficulty;
        // 6. the PoW of M against b2 derived from height j-1
        BitPattern b2 = derive_b2(id_at(p.vheight - 1), params.difficulty, params.hash_kind);
        Digest x = hash_digest(embed_message(g, p.nonce), params.hash_kind);
        if (!matches_prefix(x, b2))
            return ValidationError::BadPoW;
        // 7. payable address
        if (g.pool_address.empty())
            return ValidationError::BadPoolAddress;
        // per-height v-block quota
        auto it = scheme2c_counts_.find(p.vheight);
        if (it != scheme2c_counts_.end() && it->second >= params.max_vblocks_per_height)
            return ValidationError::HeightQuotaExceeded;
        return ValidationError::None;
    }

    // Validates and books the payload against the per-height quota; returns
    // the subsidy recipient on success.
    std::optional<std::string> accept_scheme2c(const Scheme2cPayload& p,
                                               uint64_t inclusion_height,
                                               const ChainParams& params,
                                               ValidationError* err = nullptr) {
        ValidationError e = validate_scheme2c(p, inclusion_height, params);
        if (err)
            *err = e;
        if (e != ValidationError::None)
            return std::nullopt;
        scheme2c_counts_[p.vheight] += 1;
        return p.audited_template.pool_address;
    }

    uint32_t scheme2c_count(uint64_t vheight) const {
        auto it = scheme2c_counts_.find(vheight);
        return it == scheme2c_counts_.end() ? 0 : it->second;
    }

    // Replays every entry through the validators onto a fresh chain.
    ValidationError revalidate(const ChainParams& params) const {
        if (entries_.empty())
            return ValidationError::BadHeight;
        ChainState fresh = with_genesis(slot_header(entries_.front()), params.hash_kind);
        for (size_t h = 1; h < entries_.size(); ++h) {
            ValidationError e =
                std::visit([&](const auto& item) { return fresh.append(item, params); },
                           entries_[h].item);
            if (e != ValidationError::None)
                return e;
        }
        return ValidationError::None;
    }

    // One record per height: kind, height, id, parent, difficulty and the
    // audited height for v-blocks.
    std::string snapshot() const {
        std::ostringstream os;
        os << "kind height id parent difficulty audited\n";
        for (const auto& e : entries_) {
            const TemplateHeader& h = slot_header(e);
            os << (is_vblock(e) ? "vblock" : "block") << ' ' << e.height << ' ' << e.id.hex()
               << ' ' << h.parent.hex() << ' ' << h.difficulty << ' ';
            if (is_vblock(e))
                os << std::get<VBlock>(e.item).audited_height;
            else
                os << '-';
            os << '\n';
        }
        return os.str();
    }

private:
    static unsigned __int128 work_of(uint16_t d) {
        return (unsigned __int128)1 << d;
    }

    ValidationError check_audited_template(const TemplateHeader& g,
                                           const ChainParams& params) const {
        if (g.height == 0 || g.height > tip_height())
            return ValidationError::BadAuditedTemplate;
        if (g.parent != id_at(g.height - 1))
            return ValidationError::BadAuditedTemplate;
        if (g.difficulty != params.difficulty || g.version != params.version)
            return ValidationError::BadAuditedTemplate;
        if (params.attribution != Attribution::SignatureStub && g.pool_address.empty())
            return ValidationError::BadAuditedTemplate;
        return ValidationError::None;
    }

    ValidationError check_auditor_proof(const VBlock& v) const {
        if (!v.auditor_proof)
            return ValidationError::BadAuditorProof;
        const MerkleProof& proof = *v.auditor_proof;
        const ChainEntry& audited = at(v.audited_height);
        const std::optional<Digest>& root = slot_header(audited).auditors_root;
        if (!root || proof.root != *root)
            return ValidationError::BadAuditorProof;
        if (!verify_merkle_proof(proof))
            return ValidationError::BadAuditorProof;
        if (proof.leaf.size() != v.signer.bytes.size() ||
            !std::equal(proof.leaf.begin(), proof.leaf.end(), v.signer.bytes.begin()))
            return ValidationError::BadAuditorProof;
        uint64_t expected = select_auditor_index(audited.id, proof.set_size);
        if (proof.index() != expected)
            return ValidationError::BadAuditorProof;
        return ValidationError::None;
    }

    std::vector<ChainEntry> entries_;
    unsigned __int128 work_ = 0;
    std::map<uint64_t, uint32_t> scheme2c_counts_;
};

// Fork choice between competing chains: higher cumulative work wins, ties
// keep the incumbent (first seen).
inline const ChainState& choose_fork(const ChainState& incumbent,
                                     const ChainState& challenger) {
    return challenger.cumulative_work() > incumbent.cumulative_work() ? challenger
                                                                      : incumbent;
}

} // namespace apow
