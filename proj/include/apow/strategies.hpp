// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "apow/pow.hpp"
#include "apow/workunits.hpp"

namespace apow {

enum class ActionKind : uint8_t {
    SubmitShare,
    SubmitBlock,
    SubmitVBlock,
    ReportAuditHit,
    SuppressSolution,
    RollTimestamp,
    RequestWork,
    Idle,
};

inline const char* to_string(ActionKind k) {
    switch (k) {
    case ActionKind::SubmitShare: return "SubmitShare";
    case ActionKind::SubmitBlock: return "SubmitBlock";
    case ActionKind::SubmitVBlock: return "SubmitVBlock";
    case ActionKind::ReportAuditHit: return "ReportAuditHit";
    case ActionKind::SuppressSolution: return "SuppressSolution";
    case ActionKind::RollTimestamp: return "RollTimestamp";
    case ActionKind::RequestWork: return "RequestWork";
    case ActionKind::Idle: return "Idle";
    }
    return "unknown";
}

struct MinerAction {
    ActionKind kind = ActionKind::Idle;
    uint64_t nonce = 0;
    Digest digest{};
    bool full = false;     // hit also meets full difficulty
    uint64_t new_time = 0; // RollTimestamp payload
};

// One digest hit at share difficulty; full marks hits that also satisfy the
// complete d-bit pattern.
struct HitObservation {
    uint64_t nonce = 0;
    Digest digest{};
    bool full = false;
};

// Everything a miner sees in one step: its own scan results plus public
// context. Strategies never observe pool-private data.
struct MinerObservation {
    uint64_t round = 0;
    uint64_t tick = 0;
    uint64_t template_time = 0;
    uint64_t template_epoch = 0; // bumps when the working template changes
    bool in_audit_mode = false;
    MinerId audited_miner = 0;                 // owner of the interval being re-scanned
    std::vector<HitObservation> productive_hits; // active pattern (zeros or b2)
    std::vector<HitObservation> audit_hits;      // b1 predicate, audit mode only
    bool rolling_allowed = false; // pool policy, known to every worker
    bool unit_exhausted = false;
};

enum class StrategyKind : uint8_t {
    Honest,
    Withholder,
    TimestampRoller,
    ColludingAuditor,
    VMiningWithholder,
};

inline const char* to_string(StrategyKind k) {
    switch (k) {
    case StrategyKind::Honest: return "honest";
    case StrategyKind::Withholder: return "withholder";
    case StrategyKind::TimestampRoller: return "roller";
    case StrategyKind::ColludingAuditor: return "colluder";
    case StrategyKind::VMiningWithholder: return "vwithholder";
    }
    return "unknown";
}

inline StrategyKind strategy_from_string(const std::string& s) {
    if (s == "honest") return StrategyKind::Honest;
    if (s == "withholder") return StrategyKind::Withholder;
    if (s == "roller") return StrategyKind::TimestampRoller;
    if (s == "colluder") return StrategyKind::ColludingAuditor;
    if (s == "vwithholder") return StrategyKind::VMiningWithholder;
    throw std::invalid_argument("unknown strategy: " + s);
}

struct StrategySpec {
    StrategyKind kind = StrategyKind::Honest;
    bool residual = false;    // withholder: hold back shares after a suppressed solution
    MinerId accomplice = 0;   // colluder: whose audit hits to bury
};

// Per-miner mutable strategy memory, threaded through by the event loop.
struct StrategyState {
    uint64_t epoch = 0;   // template epoch the state refers to
    bool holding = false; // residual withholder: a solution was suppressed this template
};

namespace strategy_detail {

inline void tail_actions(const MinerObservation& obs, std::vector<MinerAction>& out) {
    if (obs.unit_exhausted)
        out.push_back({ActionKind::RequestWork});
    if (out.empty())
        out.push_back({ActionKind::Idle});
}

inline void reset_on_new_template(const MinerObservation& obs, StrategyState& st) {
    if (st.epoch != obs.template_epoch) {
        st.epoch = obs.template_epoch;
        st.holding = false;
    }
}

} // namespace strategy_detail

// Submits every share hit and every full solution immediately; as auditor,
// reports every audit hit and seals the v-block on a productive full hit.
inline std::vector<MinerAction> honest_step(const MinerObservation& obs) {
    std::vector<MinerAction> out;
    for (const auto& h : obs.productive_hits) {
        if (h.full)
            out.push_back({obs.in_audit_mode ? ActionKind::SubmitVBlock : ActionKind::SubmitBlock,
                           h.nonce, h.digest, true});
        else
            out.push_back({ActionKind::SubmitShare, h.nonce, h.digest, false});
    }
    for (const auto& h : obs.audit_hits)
        out.push_back({ActionKind::ReportAuditHit, h.nonce, h.digest, h.full});
    strategy_detail::tail_actions(obs, out);
    return out;
}

// Valid, timely shares; suppressed full-difficulty solutions. In residual
// mode the miner additionally goes silent on the current template once a
// solution has been suppressed, so no later share extends the provable
// interval past the withheld nonce.
inline std::vector<MinerAction> withholder_step(const MinerObservation& obs, StrategyState& st,
                                                bool residual) {
    strategy_detail::reset_on_new_template(obs, st);
    std::vector<MinerAction> out;
    for (const auto& h : obs.productive_hits) {
        if (h.full) {
            out.push_back({ActionKind::SuppressSolution, h.nonce, h.digest, true});
            if (residual)
                st.holding = true;
        } else if (!(residual && st.holding)) {
            out.push_back({ActionKind::SubmitShare, h.nonce, h.digest, false});
        }
    }
    for (const auto& h : obs.audit_hits)
        out.push_back({ActionKind::ReportAuditHit, h.nonce, h.digest, h.full});
    strategy_detail::tail_actions(obs, out);
    return out;
}

// Rolls the template time after every hit, scattering shares across
// timestamps so no audited interval ever brackets a suppressed solution.
// When the pool forbids rolling there is nothing to gain from stale shares,
// so the strategy degrades to the plain withholder.
inline std::vector<MinerAction> timestamp_roller_step(const MinerObservation& obs,
                                                      StrategyState& st) {
    if (!obs.rolling_allowed)
        return withholder_step(obs, st, false);
    std::vector<MinerAction> out;
    for (const auto& h : obs.productive_hits) {
        if (h.full)
            out.push_back({ActionKind::SuppressSolution, h.nonce, h.digest, true});
        else
            out.push_back({ActionKind::SubmitShare, h.nonce, h.digest, false});
        MinerAction roll{ActionKind::RollTimestamp};
        roll.new_time = obs.template_time + 1;
        out.push_back(roll);
    }
    strategy_detail::tail_actions(obs, out);
    return out;
}

// Honest in every respect except that audit hits on the accomplice's work
// are never reported.
inline std::vector<MinerAction> colluding_auditor_step(const MinerObservation& obs,
                                                       MinerId accomplice) {
    std::vector<MinerAction> out;
    for (const auto& h : obs.productive_hits) {
        if (h.full)
            out.push_back({obs.in_audit_mode ? ActionKind::SubmitVBlock : ActionKind::SubmitBlock,
                           h.nonce, h.digest, true});
        else
            out.push_back({ActionKind::SubmitShare, h.nonce, h.digest, false});
    }
    if (!(obs.in_audit_mode && obs.audited_miner == accomplice)) {
        for (const auto& h : obs.audit_hits)
            out.push_back({ActionKind::ReportAuditHit, h.nonce, h.digest, h.full});
    }
    strategy_detail::tail_actions(obs, out);
    return out;
}

// Withholds while v-mining: keeps reporting audit hits for cover but
// suppresses its own productive b2 solutions.
inline std::vector<MinerAction> vmining_withholder_step(const MinerObservation& obs) {
    std::vector<MinerAction> out;
    for (const auto& h : obs.productive_hits) {
        if (h.full)
            out.push_back({ActionKind::SuppressSolution, h.nonce, h.digest, true});
        else
            out.push_back({ActionKind::SubmitShare, h.nonce, h.digest, false});
    }
    for (const auto& h : obs.audit_hits)
        out.push_back({ActionKind::ReportAuditHit, h.nonce, h.digest, h.full});
    strategy_detail::tail_actions(obs, out);
    return out;
}

inline std::vector<MinerAction> strategy_step(const StrategySpec& spec,
                                              const MinerObservation& obs, StrategyState& st) {
    switch (spec.kind) {
    case StrategyKind::Honest: return honest_step(obs);
    case StrategyKind::Withholder: return withholder_step(obs, st, spec.residual);
    case StrategyKind::TimestampRoller: return timestamp_roller_step(obs, st);
    case StrategyKind::ColludingAuditor: return colluding_auditor_step(obs, spec.accomplice);
    case StrategyKind::VMiningWithholder:
        return obs.in_audit_mode ? vmining_withholder_step(obs) : honest_step(obs);
    }
    return {{ActionKind::Idle}};
}

} // namespace apow
