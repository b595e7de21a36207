// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "apow/pow.hpp"
#include "apow/workunits.hpp"

namespace apow {

// Integer base units (satoshi-style); no floating point touches balances.
using Amount = int64_t;

enum class SchemeKind : uint8_t { PPS, FPPS, PPSplus, PPLNS, Score };

inline const char* to_string(SchemeKind k) {
    switch (k) {
    case SchemeKind::PPS: return "PPS";
    case SchemeKind::FPPS: return "FPPS";
    case SchemeKind::PPSplus: return "PPS+";
    case SchemeKind::PPLNS: return "PPLNS";
    case SchemeKind::Score: return "Score";
    }
    return "unknown";
}

inline SchemeKind scheme_from_string(const std::string& s) {
    if (s == "PPS") return SchemeKind::PPS;
    if (s == "FPPS") return SchemeKind::FPPS;
    if (s == "PPS+" || s == "PPSplus") return SchemeKind::PPSplus;
    if (s == "PPLNS") return SchemeKind::PPLNS;
    if (s == "Score") return SchemeKind::Score;
    throw std::invalid_argument("unknown payout scheme: " + s);
}

struct PayoutScheme {
    SchemeKind kind = SchemeKind::PPS;
    uint64_t window = 512;          // N for PPLNS / PPS+ fee split
    double score_half_life = 64.0;  // seconds, Score decay

    void check() const {
        if (window < 1)
            throw std::invalid_argument("PayoutScheme: window must be >= 1");
        if (score_half_life <= 0)
            throw std::invalid_argument("PayoutScheme: half-life must be positive");
    }
};

struct RewardParams {
    Amount block_subsidy = 5'000'000'000;  // 50 coins
    Amount expected_fees = 1'500'000'000;  // 15 coins, FPPS per-share / PPS+ split
    Amount vblock_reward = 4'500'000'000;  // subsidy minus a discount
    Amount auditor_prize = 0;
    uint64_t maturity_delay = 10;          // blocks a reward stays staked
    uint64_t shares_per_block = 256;       // 2^(d-d'): expected shares per solution
};

// Balance book: confirmed funds, staked (pending) rewards awaiting maturity,
// and the pool reserve that absorbs block income, share payouts and dust.
class Ledger {
public:
    void credit_pending(MinerId miner, Amount amount, uint64_t maturity_height) {
        if (amount < 0)
            throw std::invalid_argument("Ledger: negative credit");
        if (amount == 0)
            return;
        pending_.push_back({miner, amount, maturity_height});
    }

    void add_reserve(Amount delta) { reserve_ += delta; }

    void mature(uint64_t height) {
        for (auto& e : pending_) {
            if (!e.released && e.maturity <= height) {
                confirmed_[e.miner] += e.amount;
                e.released = true;
            }
        }
        std::erase_if(pending_, [](const Entry& e) { return e.released; });
    }

    // Forfeits every staked reward of the miner; the stake moves to the
    // reserve and never matures.
    Amount forfeit_pending(MinerId miner) {
        Amount sum = 0;
        for (auto& e : pending_) {
            if (e.miner == miner) {
                sum += e.amount;
                e.released = true;
            }
        }
        std::erase_if(pending_, [](const Entry& e) { return e.released; });
        reserve_ += sum;
        forfeited_[miner] += sum;
        return sum;
    }

    void ban(MinerId miner) { banned_.insert(miner); }
    bool banned(MinerId miner) const { return banned_.count(miner) != 0; }

    Amount confirmed(MinerId miner) const {
        auto it = confirmed_.find(miner);
        return it == confirmed_.end() ? 0 : it->second;
    }

    Amount pending_of(MinerId miner) const {
        Amount sum = 0;
        for (const auto& e : pending_)
            if (e.miner == miner)
                sum += e.amount;
        return sum;
    }

    Amount forfeited_of(MinerId miner) const {
        auto it = forfeited_.find(miner);
        return it == forfeited_.end() ? 0 : it->second;
    }

    Amount total_income(MinerId miner) const { return confirmed(miner) + pending_of(miner); }
    Amount reserve() const { return reserve_; }

    std::vector<MinerId> known_miners() const {
        std::set<MinerId> ids;
        for (const auto& [m, _] : confirmed_)
            ids.insert(m);
        for (const auto& e : pending_)
            ids.insert(e.miner);
        for (const auto& [m, _] : forfeited_)
            ids.insert(m);
        return {ids.begin(), ids.end()};
    }

    // miner, confirmed, pending, forfeited
    std::string export_balances() const {
        std::ostringstream os;
        os << "miner confirmed pending forfeited\n";
        for (MinerId m : known_miners())
            os << m << ' ' << confirmed(m) << ' ' << pending_of(m) << ' ' << forfeited_of(m)
               << '\n';
        os << "reserve " << reserve_ << '\n';
        return os.str();
    }

private:
    struct Entry {
        MinerId miner;
        Amount amount;
        uint64_t maturity;
        bool released = false;
    };

    std::map<MinerId, Amount> confirmed_;
    std::vector<Entry> pending_;
    std::map<MinerId, Amount> forfeited_;
    std::set<MinerId> banned_;
    Amount reserve_ = 0;
};

struct ShareWindowEntry {
    MinerId miner = 0;
    uint64_t time = 0;
};

// Per-share credit under the share-conditioned schemes. R is the expected
// block value the scheme pays against; the ratio rho is 1/shares_per_block.
inline Amount share_credit_amount(const PayoutScheme& scheme, const RewardParams& rp) {
    switch (scheme.kind) {
    case SchemeKind::PPS:
    case SchemeKind::PPSplus:
        return rp.block_subsidy / Amount(rp.shares_per_block);
    case SchemeKind::FPPS:
        return (rp.block_subsidy + rp.expected_fees) / Amount(rp.shares_per_block);
    case SchemeKind::PPLNS:
    case SchemeKind::Score:
        return 0; // block-conditioned: the share only joins the window
    }
    return 0;
}

// Credits one accepted share. Share-conditioned schemes pay immediately out
// of the reserve (stake-delayed); block-conditioned schemes pay nothing here.
inline Amount credit_share(Ledger& ledger, const PayoutScheme& scheme, const RewardParams& rp,
                           const ShareRecord& share, uint64_t maturity_height) {
    Amount amount = share_credit_amount(scheme, rp);
    if (amount > 0) {
        ledger.credit_pending(share.miner, amount, maturity_height);
        ledger.add_reserve(-amount);
    }
    return amount;
}

// A block event's exact split: per-miner credits plus the reserve remainder.
// Credits and to_reserve always sum to the distributed value.
struct Distribution {
    std::vector<std::pair<MinerId, Amount>> credits;
    Amount to_reserve = 0;

    Amount total() const {
        Amount t = to_reserve;
        for (const auto& [_, a] : credits)
            t += a;
        return t;
    }
};

namespace payout_detail {

// Splits value proportionally to non-negative weights; floor rounding, dust
// to reserve. Weight order follows the input order (deterministic).
inline Distribution split_proportional(Amount value, const std::vector<std::pair<MinerId, double>>& weights) {
    Distribution d;
    double total = 0;
    for (const auto& [_, w] : weights)
        total += w;
    if (value <= 0 || total <= 0) {
        d.to_reserve = value;
        return d;
    }
    Amount assigned = 0;
    std::map<MinerId, Amount> merged;
    for (const auto& [m, w] : weights) {
        Amount a = Amount(std::floor(double(value) * (w / total)));
        if (a > 0) {
            merged[m] += a;
            assigned += a;
        }
    }
    for (const auto& [m, a] : merged)
        d.credits.push_back({m, a});
    d.to_reserve = value - assigned;
    return d;
}

} // namespace payout_detail

// Reward split for a found block. Share-conditioned schemes route the whole
// value to the reserve (the workers were already paid per share);
// block-conditioned schemes split over the share window.
inline Distribution block_distribution(const PayoutScheme& scheme, const RewardParams& rp,
                                       Amount actual_value,
                                       std::span<const ShareWindowEntry> window,
                                       uint64_t now_time) {
    Distribution d;
    switch (scheme.kind) {
    case SchemeKind::PPS:
    case SchemeKind::FPPS:
        d.to_reserve = actual_value;
        return d;
    case SchemeKind::PPLNS: {
        std::vector<std::pair<MinerId, double>> w;
        w.reserve(window.size());
        for (const auto& e : window)
            w.push_back({e.miner, 1.0});
        return payout_detail::split_proportional(actual_value, w);
    }
    case SchemeKind::Score: {
        std::vector<std::pair<MinerId, double>> w;
        w.reserve(window.size());
        for (const auto& e : window) {
            double age = now_time >= e.time ? double(now_time - e.time) : 0.0;
            w.push_back({e.miner, std::exp2(-age / scheme.score_half_life)});
        }
        return payout_detail::split_proportional(actual_value, w);
    }
    case SchemeKind::PPSplus: {
        // Subsidy is share-conditioned (already paid per share); only the
        // fee component is split over the window.
        Amount fees = actual_value > rp.block_subsidy ? actual_value - rp.block_subsidy : 0;
        Amount base = actual_value - fees;
        std::vector<std::pair<MinerId, double>> w;
        w.reserve(window.size());
        for (const auto& e : window)
            w.push_back({e.miner, 1.0});
        Distribution fee_split = payout_detail::split_proportional(fees, w);
        fee_split.to_reserve += base;
        return fee_split;
    }
    }
    d.to_reserve = actual_value;
    return d;
}

// Applies a distribution: block income enters the reserve, worker credits
// leave it and sit staked until maturity.
inline void apply_distribution(Ledger& ledger, const Distribution& d, Amount block_value,
                               uint64_t maturity_height) {
    if (d.total() != block_value)
        throw std::logic_error("apply_distribution: distribution does not conserve value");
    ledger.add_reserve(block_value);
    for (const auto& [miner, amount] : d.credits) {
        ledger.credit_pending(miner, amount, maturity_height);
        ledger.add_reserve(-amount);
    }
}

// Replicates a reference payout vector onto a new value (the lastBlock
// attribution mode: pay the same addresses in the same proportion).
inline Distribution replicate_distribution(Amount value,
                                           std::span<const std::pair<MinerId, Amount>> reference) {
    std::vector<std::pair<MinerId, double>> w;
    w.reserve(reference.size());
    for (const auto& [m, a] : reference)
        w.push_back({m, double(a)});
    return payout_detail::split_proportional(value, w);
}

inline void mature_rewards(Ledger& ledger, uint64_t height) { ledger.mature(height); }

// Cryptographic withholding evidence: an audit hit inside a claimed-explored
// interval, reproducible by anyone from (template, nonce) and the share
// ledger.
struct EvidenceRecord {
    AuditableWorkUnit unit;
    uint64_t nonce = 0;
    Digest digest{};
    BitPattern pattern; // the audited round's predicate at share difficulty
    MinerId reporter = 0;
};

enum class Verdict : uint8_t { Guilty, Innocent, Invalid };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Guilty: return "Guilty";
    case Verdict::Innocent: return "Innocent";
    case Verdict::Invalid: return "Invalid";
    }
    return "unknown";
}

struct PenaltyPolicy {
    bool forfeit_stake = true;
    bool ban_worker = true;
};

// Invalid: the digest does not recompute, does not match the predicate, or
// the nonce lies outside the provably-delimited interval (protecting miners
// who legitimately stopped early). Innocent: the hit was reported as a share
// at that exact (template, nonce). Guilty otherwise.
inline Verdict adjudicate_evidence(const EvidenceRecord& e,
                                   std::span<const ShareRecord> reported_shares,
                                   HashKind kind = HashKind::Sha256d) {
    Digest x = hash_digest(embed_message(e.unit.tmpl, e.nonce), kind);
    if (x != e.digest || !matches_prefix(x, e.pattern))
        return Verdict::Invalid;
    if (!e.unit.range.contains(e.nonce))
        return Verdict::Invalid;
    TemplateId id = template_id(e.unit.tmpl, kind);
    for (const auto& s : reported_shares)
        if (s.tmpl_id == id && s.nonce == e.nonce)
            return Verdict::Innocent;
    return Verdict::Guilty;
}

// The ledger effect of a verdict; returns the forfeited stake.
inline Amount apply_verdict(Ledger& ledger, Verdict v, MinerId accused,
                            const PenaltyPolicy& policy) {
    if (v != Verdict::Guilty)
        return 0;
    Amount forfeited = 0;
    if (policy.forfeit_stake)
        forfeited = ledger.forfeit_pending(accused);
    if (policy.ban_worker)
        ledger.ban(accused);
    return forfeited;
}

} // namespace apow
