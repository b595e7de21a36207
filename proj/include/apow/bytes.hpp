// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace apow {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

// Append-only writer producing the canonical byte layout used everywhere a
// structure is hashed or signed. All integers are big-endian, variable-length
// fields are length-prefixed, so identical values always serialize
// identically.
class ByteWriter {
public:
    void u8(uint8_t v) { out_.push_back(v); }

    void u16(uint16_t v) {
        out_.push_back(static_cast<uint8_t>(v >> 8));
        out_.push_back(static_cast<uint8_t>(v));
    }

    void u32(uint32_t v) {
        for (int s = 24; s >= 0; s -= 8)
            out_.push_back(static_cast<uint8_t>(v >> s));
    }

    void u64(uint64_t v) {
        for (int s = 56; s >= 0; s -= 8)
            out_.push_back(static_cast<uint8_t>(v >> s));
    }

    void raw(ByteSpan b) { out_.insert(out_.end(), b.begin(), b.end()); }

    // Length-prefixed (u16) byte string; rejects fields that cannot be
    // represented canonically.
    void var_bytes(ByteSpan b) {
        if (b.size() > 0xffff)
            throw std::length_error("var_bytes: field too long");
        u16(static_cast<uint16_t>(b.size()));
        raw(b);
    }

    void var_string(std::string_view s) {
        var_bytes(ByteSpan(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }

    const Bytes& bytes() const { return out_; }
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

inline std::string to_hex(ByteSpan b) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(b.size() * 2);
    for (uint8_t c : b) {
        s.push_back(digits[c >> 4]);
        s.push_back(digits[c & 0xf]);
    }
    return s;
}

inline Bytes from_hex(std::string_view s) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (s.size() % 2 != 0)
        throw std::invalid_argument("from_hex: odd length");
    Bytes out;
    out.reserve(s.size() / 2);
    for (size_t i = 0; i < s.size(); i += 2) {
        int hi = nibble(s[i]), lo = nibble(s[i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("from_hex: bad digit");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

} // namespace apow
