// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <array>
#include <stdexcept>

#include <sodium.h>

#include "apow/bytes.hpp"

namespace apow {

// Ed25519 seals. Deterministic signatures keep fixtures and simulation logs
// reproducible across runs.
struct PublicKey {
    std::array<uint8_t, crypto_sign_PUBLICKEYBYTES> bytes{};
    auto operator<=>(const PublicKey&) const = default;
    ByteSpan span() const { return ByteSpan(bytes.data(), bytes.size()); }
};

struct SecretKey {
    std::array<uint8_t, crypto_sign_SECRETKEYBYTES> bytes{};
};

struct Signature {
    std::array<uint8_t, crypto_sign_BYTES> bytes{};
    auto operator<=>(const Signature&) const = default;
    ByteSpan span() const { return ByteSpan(bytes.data(), bytes.size()); }
};

struct KeyPair {
    PublicKey pub;
    SecretKey sec;
};

namespace sig_detail {
inline void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0)
        throw std::runtime_error("libsodium initialization failed");
}
} // namespace sig_detail

// Derives a keypair from a 32-byte seed; the same seed always yields the
// same keys.
inline KeyPair keypair_from_seed(ByteSpan seed32) {
    sig_detail::ensure_sodium();
    if (seed32.size() != crypto_sign_SEEDBYTES)
        throw std::invalid_argument("keypair_from_seed: need 32-byte seed");
    KeyPair kp;
    crypto_sign_seed_keypair(kp.pub.bytes.data(), kp.sec.bytes.data(), seed32.data());
    return kp;
}

inline Signature sign_detached(ByteSpan message, const SecretKey& sk) {
    sig_detail::ensure_sodium();
    Signature sig;
    crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(),
                         sk.bytes.data());
    return sig;
}

inline bool verify_detached(ByteSpan message, const Signature& sig, const PublicKey& pk) {
    sig_detail::ensure_sodium();
    return crypto_sign_verify_detached(sig.bytes.data(), message.data(), message.size(),
                                       pk.bytes.data()) == 0;
}

} // namespace apow
