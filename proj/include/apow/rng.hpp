// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "apow/bytes.hpp"
#include "apow/sha256.hpp"

namespace apow {

// Seed derivation for independent substreams: hashing (master, tag, a, b)
// means adding a miner or reordering rounds never perturbs anyone else's
// randomness.
inline uint64_t substream_seed(uint64_t master, std::string_view tag, uint64_t a = 0,
                               uint64_t b = 0) {
    ByteWriter w;
    w.u64(master);
    w.var_string(tag);
    w.u64(a);
    w.u64(b);
    auto h = sha256(ByteSpan(w.bytes().data(), w.bytes().size()));
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v = v << 8 | h[i];
    return v;
}

using Rng = std::mt19937_64;

// Uniform draw from [0, n) by rejection; std::uniform_int_distribution is
// implementation-defined, which would break byte-identical replays across
// toolchains.
inline uint64_t bounded_rand(Rng& rng, uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("bounded_rand: n == 0");
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

// In-place Fisher-Yates with bounded_rand; deterministic where std::shuffle
// is not.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[bounded_rand(rng, i)]);
}

// Exponential variate via inverse CDF; uniform double from 53 random bits.
inline double uniform01(Rng& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

} // namespace apow
