// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "apow/header.hpp"
#include "apow/mining.hpp"
#include "apow/pow.hpp"
#include "apow/rng.hpp"

namespace apow {

using MinerId = uint32_t;

struct RoundClosedError : std::runtime_error {
    RoundClosedError() : std::runtime_error("work round is closed") {}
};

struct NonceSpaceExhausted : std::runtime_error {
    NonceSpaceExhausted() : std::runtime_error("nonce space exhausted for round") {}
};

// A pool-issued work unit: template plus a contiguous nonce interval. The
// pattern is the productive predicate the unit is mined under — the zero
// prefix for normal rounds, b2 for v-mining — and is also what an auditor
// must later use as b1 when re-scanning the unit.
struct WorkUnit {
    TemplateHeader tmpl;
    NonceRange range;
    MinerId assigned_to = 0;
    uint64_t round = 0;
    BitPattern pattern;
};

// The last-share truncation of a work unit: [n_s, n'_e] with n'_e the nonce
// of the last share the miner submitted for this unit.
struct AuditableWorkUnit {
    TemplateHeader tmpl;
    NonceRange range;
    MinerId assigned_to = 0;
    uint64_t round = 0;
    BitPattern pattern;
    uint64_t source_end = 0; // the unit's original n_e
};

// S_i^A: the auditable work units claimed by one miner in one round. All
// templates in a round share the same parent block.
struct SearchSpace {
    MinerId miner = 0;
    uint64_t round = 0;
    std::vector<AuditableWorkUnit> units;

    uint64_t total_length() const {
        uint64_t n = 0;
        for (const auto& u : units)
            n += u.range.length();
        return n;
    }
};

struct ShareRecord {
    MinerId miner = 0;
    TemplateId tmpl_id{};
    uint64_t nonce = 0;
    Digest digest{};
    BitPattern pattern; // the share-difficulty pattern the digest matched
    uint64_t time = 0;  // submission time (simulated seconds)
    uint64_t seq = 0;   // per-round submission sequence number
};

// Issues nonce ranges for one round from a single cursor, so the union of
// all issued ranges is disjoint by construction regardless of template.
class WorkAssigner {
public:
    WorkAssigner(uint64_t round, uint64_t unit_size) : round_(round), unit_size_(unit_size) {
        if (unit_size == 0)
            throw std::invalid_argument("WorkAssigner: unit size must be positive");
    }

    WorkUnit assign(MinerId miner, const TemplateHeader& tmpl, const BitPattern& pattern) {
        if (closed_)
            throw RoundClosedError{};
        if (cursor_ > UINT64_MAX - (unit_size_ - 1))
            throw NonceSpaceExhausted{};
        WorkUnit u{tmpl, NonceRange(cursor_, cursor_ + unit_size_ - 1), miner, round_, pattern};
        cursor_ += unit_size_;
        issued_.push_back(u);
        return u;
    }

    void close() { closed_ = true; }
    bool closed() const { return closed_; }
    uint64_t round() const { return round_; }
    uint64_t unit_size() const { return unit_size_; }
    const std::vector<WorkUnit>& issued() const { return issued_; }

private:
    uint64_t round_;
    uint64_t unit_size_;
    uint64_t cursor_ = 0;
    bool closed_ = false;
    std::vector<WorkUnit> issued_;
};

// (G, n_s, n'_e): nothing beyond the last submitted share may be audited.
// Units without any share are excluded from auditing entirely.
inline std::optional<AuditableWorkUnit>
truncate_to_last_share(const WorkUnit& u, std::span<const ShareRecord> shares,
                       HashKind kind = HashKind::Sha256d) {
    TemplateId id = template_id(u.tmpl, kind);
    std::optional<uint64_t> last;
    for (const auto& s : shares) {
        if (s.tmpl_id != id)
            throw std::invalid_argument("truncate_to_last_share: share references another template");
        if (!u.range.contains(s.nonce))
            throw std::invalid_argument("truncate_to_last_share: share nonce outside unit range");
        last = last ? std::max(*last, s.nonce) : s.nonce;
    }
    if (!last)
        return std::nullopt;
    return AuditableWorkUnit{u.tmpl, NonceRange(u.range.start, *last), u.assigned_to,
                             u.round, u.pattern, u.range.end};
}

// One interval handed to an auditor for re-scanning, with the b1 pattern the
// audited work was mined under.
struct AuditInterval {
    TemplateHeader tmpl;
    NonceRange range;
    BitPattern pattern; // b1 for the re-scan
    MinerId audited = 0;
    uint64_t audited_round = 0;
};

// Deterministic random subset of a search space with total length
// round(coverage * total), assembled from granule-aligned slices sampled
// without replacement. Slices are returned in canonical (unit, start) order.
inline std::vector<AuditInterval> select_audit_subset(const SearchSpace& s, double coverage,
                                                      uint64_t seed, uint64_t granule = 1024) {
    if (coverage < 0.0 || coverage > 1.0)
        throw std::invalid_argument("select_audit_subset: coverage outside [0,1]");
    if (granule == 0)
        throw std::invalid_argument("select_audit_subset: granule must be positive");

    struct Slice {
        size_t unit;
        NonceRange range;
    };
    std::vector<Slice> slices;
    uint64_t total = 0;
    for (size_t ui = 0; ui < s.units.size(); ++ui) {
        const NonceRange& r = s.units[ui].range;
        uint64_t start = r.start;
        while (true) {
            uint64_t bucket_end = start - start % granule + (granule - 1);
            uint64_t end = std::min(bucket_end, r.end);
            slices.push_back({ui, NonceRange(start, end)});
            total += end - start + 1;
            if (end == r.end)
                break;
            start = end + 1;
        }
    }

    uint64_t target = (coverage >= 1.0) ? total
                                        : static_cast<uint64_t>(llround(coverage * double(total)));
    std::vector<AuditInterval> out;
    if (target == 0 || slices.empty())
        return out;

    Rng rng(seed);
    std::vector<size_t> order(slices.size());
    for (size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    deterministic_shuffle(order, rng);

    std::vector<size_t> chosen;
    uint64_t picked = 0;
    for (size_t idx : order) {
        if (picked >= target)
            break;
        chosen.push_back(idx);
        picked += slices[idx].range.length();
    }
    std::sort(chosen.begin(), chosen.end());
    out.reserve(chosen.size());
    for (size_t idx : chosen) {
        const Slice& sl = slices[idx];
        const AuditableWorkUnit& u = s.units[sl.unit];
        out.push_back({u.tmpl, sl.range, u.pattern, u.assigned_to, u.round});
    }
    return out;
}

enum class ShareError {
    None = 0,
    StaleTemplate,
    BadDigest,
    BelowShareDifficulty,
    Duplicate,
};

inline const char* to_string(ShareError e) {
    switch (e) {
    case ShareError::None: return "ok";
    case ShareError::StaleTemplate: return "StaleTemplate";
    case ShareError::BadDigest: return "BadDigest";
    case ShareError::BelowShareDifficulty: return "BelowShareDifficulty";
    case ShareError::Duplicate: return "Duplicate";
    }
    return "unknown";
}

// Pool-side share ledger for one round: validates submissions against the
// registered templates and share-difficulty patterns, rejects duplicates,
// and serializes accepted shares in submission order.
//
// Timestamp rolling: by default a share whose template differs from every
// registered one is stale, which is exactly what rejects miner-rolled time
// fields. When rolling is tolerated (attack reproduction), a template that
// matches a registered one in everything but time is admitted and inherits
// its patterns.
class SharePool {
public:
    explicit SharePool(HashKind kind = HashKind::Sha256d, bool allow_time_rolling = false)
        : kind_(kind), allow_time_rolling_(allow_time_rolling) {}

    void register_template(const TemplateHeader& tmpl, const BitPattern& share_pattern) {
        TemplateId id = template_id(tmpl, kind_);
        templates_.emplace(id, Registered{tmpl, share_pattern});
        base_index_.emplace(time_invariant_key(tmpl), id);
    }

    bool known_template(const TemplateId& id) const { return templates_.count(id) != 0; }

    const TemplateHeader* template_of(const TemplateId& id) const {
        auto it = templates_.find(id);
        return it == templates_.end() ? nullptr : &it->second.tmpl;
    }

    ShareError record_share(ShareRecord s) {
        auto it = templates_.find(s.tmpl_id);
        if (it == templates_.end())
            return ShareError::StaleTemplate;
        const Registered& reg = it->second;
        Digest x = hash_digest(embed_message(reg.tmpl, s.nonce), kind_);
        if (x != s.digest)
            return ShareError::BadDigest;
        if (!matches_prefix(x, reg.share_pattern))
            return ShareError::BelowShareDifficulty;
        if (!seen_.insert({s.tmpl_id, s.nonce}).second)
            return ShareError::Duplicate;
        s.pattern = reg.share_pattern;
        s.seq = accepted_.size();
        by_miner_tmpl_[{s.miner, s.tmpl_id}].push_back(accepted_.size());
        accepted_.push_back(std::move(s));
        return ShareError::None;
    }

    const std::vector<ShareRecord>& accepted() const { return accepted_; }

    bool has_share(const TemplateId& id, uint64_t nonce) const {
        return seen_.count({id, nonce}) != 0;
    }

    std::vector<ShareRecord> shares_of(MinerId miner, const TemplateId& id) const {
        std::vector<ShareRecord> out;
        auto it = by_miner_tmpl_.find({miner, id});
        if (it == by_miner_tmpl_.end())
            return out;
        out.reserve(it->second.size());
        for (size_t i : it->second)
            out.push_back(accepted_[i]);
        return out;
    }

    std::optional<uint64_t> last_share_nonce(MinerId miner, const TemplateId& id) const {
        auto it = by_miner_tmpl_.find({miner, id});
        if (it == by_miner_tmpl_.end())
            return std::nullopt;
        uint64_t best = 0;
        for (size_t i : it->second)
            best = std::max(best, accepted_[i].nonce);
        return best;
    }

    // Line-oriented export: miner, template id, nonce, digest, time.
    std::string export_ledger() const {
        std::string out = "miner template nonce digest time\n";
        for (const auto& s : accepted_) {
            out += std::to_string(s.miner);
            out += ' ';
            out += s.tmpl_id.hex();
            out += ' ';
            out += std::to_string(s.nonce);
            out += ' ';
            out += s.digest.hex();
            out += ' ';
            out += std::to_string(s.time);
            out += '\n';
        }
        return out;
    }

private:
    struct Registered {
        TemplateHeader tmpl;
        BitPattern share_pattern;
    };

    Digest time_invariant_key(const TemplateHeader& tmpl) const {
        TemplateHeader t = tmpl;
        t.time = 0;
        return template_id(t, kind_);
    }

public:
    // Admits a miner-supplied template that matches a registered one in all
    // fields except time. Only meaningful when rolling is tolerated.
    bool record_rolled_template(const TemplateHeader& rolled) {
        if (!allow_time_rolling_)
            return false;
        auto base = base_index_.find(time_invariant_key(rolled));
        if (base == base_index_.end())
            return false;
        const Registered& reg = templates_.at(base->second);
        register_template(rolled, reg.share_pattern);
        return true;
    }

private:
    HashKind kind_;
    bool allow_time_rolling_;
    std::map<TemplateId, Registered> templates_;
    std::map<Digest, TemplateId> base_index_;
    std::set<std::pair<TemplateId, uint64_t>> seen_;
    std::map<std::pair<MinerId, TemplateId>, std::vector<size_t>> by_miner_tmpl_;
    std::vector<ShareRecord> accepted_;
};

} // namespace apow
