// Copyright (c) 2026 The APoW Core developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "apow/header.hpp"
#include "apow/mining.hpp"
#include "apow/pow.hpp"
#include "apow/rng.hpp"
#include "apow/sha256.hpp"

using namespace apow;

namespace {

TemplateHeader fixture_template(uint64_t height = 1, uint64_t salt = 0) {
    TemplateHeader g;
    g.version = 1;
    g.height = height;
    g.time = 1700000000 + salt;
    g.difficulty = 8;
    g.pool_address = "pool0";
    ByteWriter w;
    w.u64(salt);
    g.txroot = hash_digest(ByteSpan(w.bytes().data(), w.bytes().size()));
    return g;
}

// Independent per-nonce oracle: hashes each nonce itself and checks the
// leading bits by hand, without scan_pattern or matches_prefix.
std::vector<uint64_t> brute_force_zero_hits(const TemplateHeader& g, uint64_t start, uint64_t end,
                                            size_t d) {
    std::vector<uint64_t> hits;
    for (uint64_t n = start; n <= end; ++n) {
        Digest x = hash_digest(embed_message(g, n));
        bool ok = true;
        for (size_t bit = 0; bit < d; ++bit) {
            uint8_t byte = x.bytes[bit / 8];
            if ((byte >> (7 - bit % 8)) & 1) {
                ok = false;
                break;
            }
        }
        if (ok)
            hits.push_back(n);
    }
    return hits;
}

} // namespace

TEST_CASE("sha256 standard vectors") {
    CHECK(to_hex(sha256(ByteSpan{})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    const char* abc = "abc";
    CHECK(to_hex(sha256(ByteSpan(reinterpret_cast<const uint8_t*>(abc), 3))) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const char* two = "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq";
    CHECK(to_hex(sha256(ByteSpan(reinterpret_cast<const uint8_t*>(two), 56))) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 streaming equals one-shot on random splits") {
    Rng rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        size_t len = bounded_rand(rng, 400);
        Bytes data(len);
        for (auto& b : data)
            b = uint8_t(rng());
        auto whole = sha256(ByteSpan(data));
        Sha256 ctx;
        size_t pos = 0;
        while (pos < len) {
            size_t chunk = 1 + bounded_rand(rng, len - pos);
            ctx.update(ByteSpan(data.data() + pos, chunk));
            pos += chunk;
        }
        CHECK(ctx.finalize() == whole);
    }
}

TEST_CASE("hash_digest double SHA-256 vector and determinism") {
    Digest empty = hash_digest(ByteSpan{});
    CHECK(empty.hex() == "5df6e0e2761359d30a8275058e299fcc0381534545f55cf43e41983f5d4c9456");
    CHECK(hash_digest(ByteSpan{}) == empty);

    const char* abc = "abc";
    CHECK(hash_digest(ByteSpan(reinterpret_cast<const uint8_t*>(abc), 3)).hex() ==
          "4f8b42c22dd3729b519ba6f68d2da7cc5b2d606d05daed5ad5128cc03e6c6358");

    // single SHA-256 configuration
    CHECK(hash_digest(ByteSpan{}, HashKind::Sha256).hex() ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("messages differing in one nonce bit hash differently") {
    TemplateHeader g = fixture_template();
    Digest a = hash_digest(embed_message(g, 0x10));
    Digest b = hash_digest(embed_message(g, 0x11));
    CHECK(a != b);
}

TEST_CASE("embed_message appends the big-endian nonce") {
    TemplateHeader g = fixture_template();
    Bytes ser = g.serialized();
    Bytes m0 = embed_message(g, 0);
    REQUIRE(m0.size() == ser.size() + 8);
    CHECK(std::equal(ser.begin(), ser.end(), m0.begin()));
    for (size_t i = ser.size(); i < m0.size(); ++i)
        CHECK(m0[i] == 0);

    Bytes m1 = embed_message(g, 1);
    Bytes m2 = embed_message(g, 2);
    CHECK(m1 != m2);

    Bytes mx = embed_message(g, 0x01020304);
    CHECK(mx[mx.size() - 4] == 0x01);
    CHECK(mx[mx.size() - 3] == 0x02);
    CHECK(mx[mx.size() - 2] == 0x03);
    CHECK(mx[mx.size() - 1] == 0x04);
}

TEST_CASE("canonical serialization golden fixture") {
    // Frozen vectors for a fully populated and a minimal header; one
    // hex-encoded message per line, see tests/data/golden_embed.txt.
    std::ifstream in("tests/data/golden_embed.txt");
    REQUIRE(in.good());

    TemplateHeader g;
    g.version = 2;
    g.parent = Digest::from_hex(
        "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff");
    g.txroot = Digest::from_hex(
        "ffeeddccbbaa99887766554433221100ffeeddccbbaa99887766554433221100");
    g.height = 42;
    g.time = 1234567890;
    g.difficulty = 12;
    g.pool_address = "pool-address-1";
    g.auditors_root = Digest::from_hex(
        "0101010101010101010101010101010101010101010101010101010101010101");
    g.last_block = Digest::from_hex(
        "0202020202020202020202020202020202020202020202020202020202020202");

    TemplateHeader minimal;
    minimal.pool_address = "p";

    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(to_hex(ByteSpan(embed_message(g, 0x01020304))) == line);
    REQUIRE(std::getline(in, line));
    CHECK(to_hex(ByteSpan(embed_message(minimal, 0))) == line);
}

TEST_CASE("bit pattern construction and prefix matching") {
    BitPattern empty = BitPattern::zeros(0);
    CHECK(empty.empty());
    Digest any = hash_digest(ByteSpan{});
    CHECK(matches_prefix(any, empty));

    // digest starting 0000'0000 matches the zero byte pattern
    Digest zeroish{};
    zeroish.bytes[0] = 0x00;
    zeroish.bytes[1] = 0xff;
    CHECK(matches_prefix(zeroish, BitPattern::zeros(8)));
    CHECK_FALSE(matches_prefix(zeroish, BitPattern::zeros(9)));

    // digest starting 1010... fails the zero pattern at d=4
    Digest tenish{};
    tenish.bytes[0] = 0xa0;
    CHECK_FALSE(matches_prefix(tenish, BitPattern::zeros(4)));

    BitPattern p = BitPattern::from_value(0x5a, 8);
    Digest d5a{};
    d5a.bytes[0] = 0x5a;
    CHECK(matches_prefix(d5a, p));
    CHECK(p.to_value() == 0x5a);
    CHECK(p.to_string() == "01011010");

    // prefix_of round-trips through matches_prefix at odd lengths
    Digest h = hash_digest(ByteSpan(reinterpret_cast<const uint8_t*>("x"), 1));
    for (size_t d : {0u, 1u, 3u, 8u, 13u, 64u, 255u, 256u})
        CHECK(matches_prefix(h, BitPattern::prefix_of(h, d)));

    CHECK_THROWS_AS(BitPattern::zeros(257), std::invalid_argument);
    CHECK_THROWS_AS(BitPattern::from_value(4, 2), std::invalid_argument);
}

TEST_CASE("pattern truncation keeps leading bits") {
    BitPattern p = BitPattern::from_value(0b110101, 6);
    CHECK(p.truncated(3) == BitPattern::from_value(0b110, 3));
    CHECK(p.truncated(6) == p);
    CHECK(p.truncated(0).empty());
    CHECK_THROWS_AS(p.truncated(7), std::invalid_argument);
}

TEST_CASE("fine distance target") {
    Digest x{};
    x.bytes[0] = 0x10; // pref_4 = 0b0001 = 1
    BitPattern zero4 = BitPattern::zeros(4);

    // distance zero always passes
    Digest exact{};
    CHECK(fine_distance_ok(exact, zero4, FineTarget::within(0)));
    // distance 1 <= 1
    CHECK(fine_distance_ok(x, zero4, FineTarget::within(1)));
    // distance 3 > 1
    Digest x3{};
    x3.bytes[0] = 0x30;
    CHECK_FALSE(fine_distance_ok(x3, zero4, FineTarget::within(1)));

    // disabled target falls back to exact prefix matching
    CHECK_FALSE(fine_distance_ok(x, zero4, FineTarget::exact()));
    CHECK(fine_distance_ok(exact, zero4, FineTarget::exact()));

    // no wraparound: pref 0b1111 vs pattern 0b0000 is distance 15
    Digest xf{};
    xf.bytes[0] = 0xf0;
    CHECK_FALSE(fine_distance_ok(xf, zero4, FineTarget::within(14)));
    CHECK(fine_distance_ok(xf, zero4, FineTarget::within(15)));
}

TEST_CASE("derive_b2 fixtures") {
    CHECK(derive_b2(Digest{}, 0).empty());

    // frozen first byte of sha256d(0x00..01)
    Digest fid = Digest::from_hex(
        "0000000000000000000000000000000000000000000000000000000000000001");
    BitPattern b = derive_b2(fid, 8);
    CHECK(b.to_value() == 0x32);

    Digest idA = Digest::from_hex(
        "0000000000000000000000000000000000000000000000000000000000000002");
    Digest idB = Digest::from_hex(
        "0000000000000000000000000000000000000000000000000000000000000003");
    CHECK(derive_b2(idA, 64).to_value() == 0x939894f70e6c3a25ULL);
    CHECK(derive_b2(idB, 64).to_value() == 0xc9f405b40e38bcb7ULL);
    CHECK(!(derive_b2(idA, 16) == derive_b2(idB, 16)));

    CHECK_THROWS_AS(derive_b2(fid, 257), std::invalid_argument);
}

TEST_CASE("mine_scan matches the brute-force oracle") {
    // d = 0 matches every nonce
    TemplateHeader g = fixture_template();
    auto all = mine_scan(g, NonceRange(0, 15), 0);
    REQUIRE(all.size() == 16);
    for (size_t i = 0; i < all.size(); ++i)
        CHECK(all[i].nonce == i);

    // a single non-matching nonce yields an empty list
    auto empty = brute_force_zero_hits(g, 5, 5, 8);
    if (empty.empty())
        CHECK(mine_scan(g, NonceRange(5, 5), 8).empty());

    // randomized oracle comparison
    Rng rng(substream_seed(42, "oracle"));
    for (int iter = 0; iter < 20; ++iter) {
        TemplateHeader t = fixture_template(1 + iter, rng());
        size_t d = bounded_rand(rng, 9); // d <= 8 keeps hits frequent
        uint64_t start = bounded_rand(rng, 1 << 16);
        uint64_t len = 1 + bounded_rand(rng, 2048);
        auto got = mine_scan(t, NonceRange(start, start + len - 1), d);
        auto want = brute_force_zero_hits(t, start, start + len - 1, d);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].nonce == want[i]);
            CHECK(hash_digest(embed_message(t, got[i].nonce)) == got[i].digest);
        }
    }
}

TEST_CASE("vmine_scan equals two independent single-pattern scans") {
    Rng rng(substream_seed(43, "dual"));
    for (int iter = 0; iter < 20; ++iter) {
        TemplateHeader t = fixture_template(2, rng());
        size_t d = 1 + bounded_rand(rng, 8);
        BitPattern b1 = BitPattern::zeros(d);
        BitPattern b2 = BitPattern::prefix_of(hash_digest(embed_message(t, rng())), d);
        uint64_t start = bounded_rand(rng, 1 << 20);
        NonceRange r(start, start + 1023);

        VScanResult dual = vmine_scan(t, r, b1, b2);
        auto audit = scan_pattern(t, r, b1);
        auto productive = scan_pattern(t, r, b2);
        CHECK(dual.audit_hits == audit);
        CHECK(dual.share_hits == productive);
    }
}

TEST_CASE("vmine_scan degenerate and disjoint cases") {
    TemplateHeader g = fixture_template();

    // both patterns empty: every nonce lands in both lists
    VScanResult both = vmine_scan(g, NonceRange(0, 3), BitPattern::zeros(0), BitPattern::zeros(0));
    REQUIRE(both.share_hits.size() == 4);
    CHECK(both.share_hits == both.audit_hits);

    // distinct patterns of equal length never share a hit
    BitPattern b1 = BitPattern::zeros(8);
    BitPattern b2 = BitPattern::from_value(0x5a, 8);
    VScanResult r = vmine_scan(g, NonceRange(0, 4095), b1, b2);
    for (const auto& a : r.audit_hits)
        for (const auto& s : r.share_hits)
            CHECK(a.nonce != s.nonce);

    CHECK_THROWS_AS(vmine_scan(g, NonceRange(0, 1), BitPattern::zeros(3), BitPattern::zeros(4)),
                    std::invalid_argument);
}

TEST_CASE("parallel split invariance") {
    Rng rng(substream_seed(44, "split"));
    TemplateHeader g = fixture_template(3, 99);
    NonceRange whole(1000, 3047);
    auto full = mine_scan(g, whole, 4);
    uint64_t mid = 1000 + bounded_rand(rng, 2047);
    auto left = mine_scan(g, NonceRange(1000, mid), 4);
    auto right = mine_scan(g, NonceRange(mid + 1, 3047), 4);
    left.insert(left.end(), right.begin(), right.end());
    CHECK(left == full);
}

TEST_CASE("geometric trials at small difficulty") {
    // Mean nonces-to-first-hit approaches 2^d; a cheap version of the
    // acceptance statistic at d = 6.
    const size_t d = 6;
    const int solves = 2000;
    uint64_t total = 0;
    for (int i = 0; i < solves; ++i) {
        TemplateHeader t = fixture_template(4, i);
        auto hit = find_first(t, NonceRange(0, UINT64_MAX), BitPattern::zeros(d));
        REQUIRE(hit);
        total += hit->nonce + 1;
    }
    double mean = double(total) / solves;
    CHECK(mean > 64.0 * 0.85);
    CHECK(mean < 64.0 * 1.15);
}

TEST_CASE("nonce range basics") {
    CHECK_THROWS_AS(NonceRange(5, 4), std::invalid_argument);
    NonceRange r(5, 9);
    CHECK(r.length() == 5);
    CHECK(r.contains(5));
    CHECK(r.contains(9));
    CHECK_FALSE(r.contains(10));
}
