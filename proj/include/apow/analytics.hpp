// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace apow {

// Cost model for the digest-caching attack: a miner storing every computed
// digest of one block interval so it can replay them when v-mining.
struct CachingModel {
    double hashrate = 0;            // hashes per second
    double expected_block_time = 0; // seconds per block
    double stored_bits_per_digest = 0;
    double ram_word_bits = 128;

    void check() const {
        if (hashrate < 0 || expected_block_time <= 0 || stored_bits_per_digest <= 0 ||
            ram_word_bits <= 0)
            throw std::invalid_argument("CachingModel: parameters must be positive");
    }
};

// Bytes of RAM needed to cache one block interval's digests:
// hashrate * block_time * bits_per_digest / 8. Linear in every input.
inline double caching_storage_bytes(const CachingModel& m) {
    m.check();
    return m.hashrate * m.expected_block_time * m.stored_bits_per_digest / 8.0;
}

// How many truncated digests one RAM word fetch returns.
inline uint64_t digests_per_ram_word(const CachingModel& m) {
    m.check();
    if (m.stored_bits_per_digest > m.ram_word_bits)
        return 0;
    return static_cast<uint64_t>(m.ram_word_bits / m.stored_bits_per_digest);
}

// Residual withholding: a miner that finds a solution may hold it back and
// stop submitting shares, hoping the interval never becomes auditable.
//
// Model: shares and solutions arrive as independent Poisson processes with
// rates lambda_s and lambda_b over a template lifetime T. The miner is
// exposed only if a share lands before both the first solution and the
// template expiry; the escape event is min(tau_b, T) < tau_s, giving
//   P = lambda_b/(lambda_s+lambda_b) * (1 - e^{-(lambda_s+lambda_b) T})
//     + e^{-(lambda_s+lambda_b) T}.
// Limits: lambda_b = 0 collapses to the no-share branch e^{-lambda_s T};
// lambda_s -> infinity drives P to 0.
inline double residual_escape_probability(double share_rate, double solution_rate,
                                          double template_lifetime) {
    if (share_rate < 0 || solution_rate < 0)
        throw std::invalid_argument("residual_escape_probability: negative rate");
    if (template_lifetime <= 0)
        throw std::invalid_argument("residual_escape_probability: lifetime must be positive");
    double total = share_rate + solution_rate;
    if (total == 0)
        return 1.0;
    double decay = std::exp(-total * template_lifetime);
    return solution_rate / total * (1.0 - decay) + decay;
}

} // namespace apow
