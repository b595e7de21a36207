// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <array>
#include <cstdint>
#include <cstring>

#include "apow/bytes.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define APOW_SHA_NI_AVAILABLE 1
#include <immintrin.h>
#endif

namespace apow {

namespace sha256_detail {

inline constexpr uint32_t K[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

inline void transform_scalar(uint32_t state[8], const uint8_t* data, size_t blocks) {
    while (blocks--) {
        uint32_t w[64];
        for (int i = 0; i < 16; ++i) {
            w[i] = uint32_t(data[4 * i]) << 24 | uint32_t(data[4 * i + 1]) << 16 |
                   uint32_t(data[4 * i + 2]) << 8 | uint32_t(data[4 * i + 3]);
        }
        for (int i = 16; i < 64; ++i) {
            uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
        uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
        for (int i = 0; i < 64; ++i) {
            uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            uint32_t ch = (e & f) ^ (~e & g);
            uint32_t t1 = h + S1 + ch + K[i] + w[i];
            uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            uint32_t t2 = S0 + maj;
            h = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        state[0] += a; state[1] += b; state[2] += c; state[3] += d;
        state[4] += e; state[5] += f; state[6] += g; state[7] += h;
        data += 64;
    }
}

#ifdef APOW_SHA_NI_AVAILABLE
__attribute__((target("sha,sse4.1")))
inline void transform_ni(uint32_t state[8], const uint8_t* data, size_t blocks) {
    const __m128i mask = _mm_set_epi64x(0x0c0d0e0f08090a0bULL, 0x0405060700010203ULL);

    __m128i tmp = _mm_loadu_si128(reinterpret_cast<const __m128i*>(&state[0]));
    __m128i st1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(&state[4]));
    tmp = _mm_shuffle_epi32(tmp, 0xb1);
    st1 = _mm_shuffle_epi32(st1, 0x1b);
    __m128i st0 = _mm_alignr_epi8(tmp, st1, 8);
    st1 = _mm_blend_epi16(st1, tmp, 0xf0);

    while (blocks--) {
        __m128i save0 = st0;
        __m128i save1 = st1;
        __m128i msg, m0, m1, m2, m3;

        m0 = _mm_shuffle_epi8(_mm_loadu_si128(reinterpret_cast<const __m128i*>(data + 0)), mask);
        msg = _mm_add_epi32(m0, _mm_loadu_si128(reinterpret_cast<const __m128i*>(&K[0])));
        st1 = _mm_sha256rnds2_epu32(st1, st0, msg);
        st0 = _mm_sha256rnds2_epu32(st0, st1, _mm_shuffle_epi32(msg, 0x0e));

        m1 = _mm_shuffle_epi8(_mm_loadu_si128(reinterpret_cast<const __m128i*>(data + 16)), mask);
        msg = _mm_add_epi32(m1, _mm_loadu_si128(reinterpret_cast<const __m128i*>(&K[4])));
        st1 = _mm_sha256rnds2_epu32(st1, st0, msg);
        st0 = _mm_sha256rnds2_epu32(st0, st1, _mm_shuffle_epi32(msg, 0x0e));
        m0 = _mm_sha256msg1_epu32(m0, m1);

        m2 = _mm_shuffle_epi8(_mm_loadu_si128(reinterpret_cast<const __m128i*>(data + 32)), mask);
        msg = _mm_add_epi32(m2, _mm_loadu_si128(reinterpret_cast<const __m128i*>(&K[8])));
        st1 = _mm_sha256rnds2_epu32(st1, st0, msg);
        st0 = _mm_sha256rnds2_epu32(st0, st1, _mm_shuffle_epi32(msg, 0x0e));
        m1 = _mm_sha256msg1_epu32(m1, m2);

        m3 = _mm_shuffle_epi8(_mm_loadu_si128(reinterpret_cast<const __m128i*>(data + 48)), mask);
        msg = _mm_add_epi32(m3, _mm_loadu_si128(reinterpret_cast<const __m128i*>(&K[12])));
        st1 = _mm_sha256rnds2_epu32(st1, st0, msg);
        tmp = _mm_alignr_epi8(m3, m2, 4);
        m0 = _mm_add_epi32(m0, tmp);
        m0 = _mm_sha256msg2_epu32(m0, m3);
        st0 = _mm_sha256rnds2_epu32(st0, st1, _mm_shuffle_epi32(msg, 0x0e));
        m2 = _mm_sha256msg1_epu32(m2, m3);

        for (int i = 16; i < 64; i += 16) {
            msg = _mm_add_epi32(m0, _mm_loadu_si128(reinterpret_cast<const __m128i*>(&K[i])));
            st1 = _mm_sha256rnds2_epu32(st1, st0, msg);
            tmp = _mm_alignr_epi8(m0, m3, 4);
            m1 = _mm_add_epi32(m1, tmp);
            m1 = _mm_sha256msg2_epu32(m1, m0);
            st0 = _mm_sha256rnds2_epu32(st0, st1, _mm_shuffle_epi32(msg, 0x0e));
            m3 = _mm_sha256msg1_epu32(m3, m0);

            msg = _mm_add_epi32(m1, _mm_loadu_si128(reinterpret_cast<const __m128i*>(&K[i + 4])));
            st1 = _mm_sha256rnds2_epu32(st1, st0, msg);
            tmp = _mm_alignr_epi8(m1, m0, 4);
            m2 = _mm_add_epi32(m2, tmp);
            m2 = _mm_sha256msg2_epu32(m2, m1);
            st0 = _mm_sha256rnds2_epu32(st0, st1, _mm_shuffle_epi32(msg, 0x0e));
            m0 = _mm_sha256msg1_epu32(m0, m1);

            msg = _mm_add_epi32(m2, _mm_loadu_si128(reinterpret_cast<const __m128i*>(&K[i + 8])));
            st1 = _mm_sha256rnds2_epu32(st1, st0, msg);
            tmp = _mm_alignr_epi8(m2, m1, 4);
            m3 = _mm_add_epi32(m3, tmp);
            m3 = _mm_sha256msg2_epu32(m3, m2);
            st0 = _mm_sha256rnds2_epu32(st0, st1, _mm_shuffle_epi32(msg, 0x0e));
            m1 = _mm_sha256msg1_epu32(m1, m2);

            msg = _mm_add_epi32(m3, _mm_loadu_si128(reinterpret_cast<const __m128i*>(&K[i + 12])));
            st1 = _mm_sha256rnds2_epu32(st1, st0, msg);
            tmp = _mm_alignr_epi8(m3, m2, 4);
            m0 = _mm_add_epi32(m0, tmp);
            m0 = _mm_sha256msg2_epu32(m0, m3);
            st0 = _mm_sha256rnds2_epu32(st0, st1, _mm_shuffle_epi32(msg, 0x0e));
            m2 = _mm_sha256msg1_epu32(m2, m3);
        }

        st0 = _mm_add_epi32(st0, save0);
        st1 = _mm_add_epi32(st1, save1);
        data += 64;
    }

    tmp = _mm_shuffle_epi32(st0, 0x1b);
    st1 = _mm_shuffle_epi32(st1, 0xb1);
    st0 = _mm_blend_epi16(tmp, st1, 0xf0);
    st1 = _mm_alignr_epi8(st1, tmp, 8);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(&state[0]), st0);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(&state[4]), st1);
}

inline bool have_sha_ni() {
    static const bool ok = __builtin_cpu_supports("sha") && __builtin_cpu_supports("sse4.1");
    return ok;
}
#endif // APOW_SHA_NI_AVAILABLE

inline void transform(uint32_t state[8], const uint8_t* data, size_t blocks) {
#ifdef APOW_SHA_NI_AVAILABLE
    if (have_sha_ni()) {
        transform_ni(state, data, blocks);
        return;
    }
#endif
    transform_scalar(state, data, blocks);
}

} // namespace sha256_detail

// Incremental SHA-256.
class Sha256 {
public:
    Sha256() { reset(); }

    void reset() {
        state_ = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                  0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
        buffered_ = 0;
        total_ = 0;
    }

    Sha256& update(ByteSpan data) {
        const uint8_t* p = data.data();
        size_t n = data.size();
        total_ += n;
        if (buffered_ != 0) {
            size_t take = std::min(n, size_t(64) - buffered_);
            std::memcpy(buf_.data() + buffered_, p, take);
            buffered_ += take;
            p += take;
            n -= take;
            if (buffered_ == 64) {
                sha256_detail::transform(state_.data(), buf_.data(), 1);
                buffered_ = 0;
            }
        }
        if (n >= 64) {
            size_t blocks = n / 64;
            sha256_detail::transform(state_.data(), p, blocks);
            p += blocks * 64;
            n -= blocks * 64;
        }
        if (n != 0) {
            std::memcpy(buf_.data(), p, n);
            buffered_ = n;
        }
        return *this;
    }

    std::array<uint8_t, 32> finalize() {
        uint64_t bitlen = total_ * 8;
        uint8_t pad[72];
        size_t padlen = (buffered_ < 56) ? 56 - buffered_ : 120 - buffered_;
        pad[0] = 0x80;
        std::memset(pad + 1, 0, padlen - 1);
        for (int i = 0; i < 8; ++i)
            pad[padlen + i] = static_cast<uint8_t>(bitlen >> (56 - 8 * i));
        update(ByteSpan(pad, padlen + 8));
        std::array<uint8_t, 32> out;
        for (int i = 0; i < 8; ++i) {
            out[4 * i] = static_cast<uint8_t>(state_[i] >> 24);
            out[4 * i + 1] = static_cast<uint8_t>(state_[i] >> 16);
            out[4 * i + 2] = static_cast<uint8_t>(state_[i] >> 8);
            out[4 * i + 3] = static_cast<uint8_t>(state_[i]);
        }
        return out;
    }

private:
    std::array<uint32_t, 8> state_;
    std::array<uint8_t, 64> buf_;
    size_t buffered_ = 0;
    uint64_t total_ = 0;
};

inline std::array<uint8_t, 32> sha256(ByteSpan data) {
    Sha256 ctx;
    ctx.update(data);
    return ctx.finalize();
}

inline std::array<uint8_t, 32> sha256d(ByteSpan data) {
    auto first = sha256(data);
    return sha256(ByteSpan(first.data(), first.size()));
}

} // namespace apow
