#include "doctest.h"

#include "czk/bytes.hpp"
#include "czk/gf.hpp"
#include "czk/rational.hpp"
#include "czk/rng.hpp"
#include "czk/sha256.hpp"

using namespace czk;

TEST_CASE("sha256 matches the standard vectors") {
    CHECK(to_hex(sha256_bytes(Bytes{})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    Bytes abc{'a', 'b', 'c'};
    CHECK(to_hex(sha256_bytes(abc)) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // one full block + spillover
    Bytes longer(1000, 0x61);
    CHECK(to_hex(sha256_bytes(longer)) ==
          "41edece42d63e8d9bf515a9ba6932e1c20cbc9f5a5d134645adb5db1b9737ea3");
}

TEST_CASE("gf64 fast multiply agrees with the bitwise oracle") {
    Rng rng(7);
    for (int i = 0; i < 2000; i++) {
        uint64_t a = rng.next_u64(), b = rng.next_u64();
        CHECK(gf64::mul(a, b) == gf64::mul_slow(a, b));
    }
    CHECK(gf64::mul(1, 0x12345678u) == 0x12345678u);
    CHECK(gf64::mul(0, 0xffffffffffffffffull) == 0);
}

TEST_CASE("gf64 is commutative and distributive") {
    Rng rng(9);
    for (int i = 0; i < 500; i++) {
        uint64_t a = rng.next_u64(), b = rng.next_u64(), c = rng.next_u64();
        CHECK(gf64::mul(a, b) == gf64::mul(b, a));
        CHECK(gf64::mul(a, b ^ c) == (gf64::mul(a, b) ^ gf64::mul(a, c)));
        CHECK(gf64::mul(gf64::mul(a, b), c) == gf64::mul(a, gf64::mul(b, c)));
    }
}

TEST_CASE("gf256 basic algebra") {
    CHECK(gf256::mul(1, 0x53) == 0x53);
    // AES reference: {53} * {CA} = {01}
    CHECK(gf256::mul(0x53, 0xca) == 0x01);
    for (int a = 0; a < 256; a++) {
        CHECK(gf256::mul(uint8_t(a), 0) == 0);
        for (int b = a; b < 256; b += 37)
            CHECK(gf256::mul(uint8_t(a), uint8_t(b)) == gf256::mul(uint8_t(b), uint8_t(a)));
    }
}

TEST_CASE("rng determinism and bounded draws") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; i++) CHECK(a.next_u64() == b.next_u64());
    Rng r(1);
    for (int i = 0; i < 10000; i++) {
        uint64_t x = r.below(7);
        CHECK(x < 7);
    }
    CHECK(derive_seed(1, "x", 0) != derive_seed(1, "x", 1));
    CHECK(derive_seed(1, "x", 0) != derive_seed(1, "y", 0));
    CHECK(derive_seed(1, "x", 0) == derive_seed(1, "x", 0));
}

TEST_CASE("bit utilities round-trip") {
    Bytes src{0b10110010, 0b01000001};
    Bytes dst(2, 0);
    copy_bits(dst, 3, src, 0, 13);
    for (size_t i = 0; i < 13; i++) CHECK(get_bit(dst, 3 + i) == get_bit(src, i));
    CHECK(get_bit(dst, 0) == 0);
}

TEST_CASE("length-prefixed encodings are unambiguous") {
    Bytes a, b;
    append_framed(a, Bytes{1, 2});
    append_framed(a, Bytes{3});
    append_framed(b, Bytes{1});
    append_framed(b, Bytes{2, 3});
    CHECK(a != b);  // same payload bytes, different framing

    Bytes blk;
    append_block(blk, {{Bytes{1, 2}}, {Bytes{}}});
    CHECK(blk.size() == 4 + (4 + 2) + (4 + 0));
}

TEST_CASE("bigint helpers") {
    CHECK(ipow(BigInt(2), 10) == 1024);
    CHECK(ipow(BigInt(64), 13) == BigInt("302231454903657293676544"));
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(1000, 2) == 499500);
    CHECK(rat_string(Rat(1, 3)) == "1/3");
    CHECK(to_double(Rat(1, 2)) == 0.5);
}
