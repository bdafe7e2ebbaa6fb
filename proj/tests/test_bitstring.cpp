#include "qkg/bitstring.hpp"
#include "qkg/rng.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace qkg;

TEST_CASE("xor_mask matches the bitwise definition") {
    const BitString data = BitString::from_string("1010");
    const BitString mask = BitString::from_string("0110");
    CHECK(xor_mask(data, mask) == BitString::from_string("1100"));
}

TEST_CASE("xor_mask with an all-zero mask is the identity") {
    Rng rng(11, 0);
    const BitString data = rng.bits(77);
    CHECK(xor_mask(data, BitString(77)) == data);
}

TEST_CASE("xor_mask is an involution") {
    Rng rng(42, 1);
    for (int i = 0; i < 1000; ++i) {
        const BitString d = rng.bits(64);
        const BitString m = rng.bits(64);
        CHECK(xor_mask(xor_mask(d, m), m) == d);
    }
}

TEST_CASE("xor_mask rejects length mismatch instead of truncating") {
    CHECK_THROWS_AS(xor_mask(BitString(4), BitString(5)), std::invalid_argument);
}

TEST_CASE("hamming_fraction basics") {
    Rng rng(5, 0);
    const BitString a = rng.bits(100);
    CHECK(hamming_fraction(a, a) == 0.0);

    BitString complement = a;
    for (std::size_t i = 0; i < a.size(); ++i) complement.flip_bit(i);
    CHECK(hamming_fraction(a, complement) == 1.0);

    CHECK(hamming_fraction(BitString::from_string("0011"), BitString::from_string("0110")) == 0.5);

    CHECK_THROWS_AS(hamming_fraction(BitString(0), BitString(0)), std::invalid_argument);
    CHECK_THROWS_AS(hamming_fraction(BitString(3), BitString(4)), std::invalid_argument);
}

TEST_CASE("hamming_fraction is symmetric") {
    Rng rng(6, 0);
    for (int i = 0; i < 50; ++i) {
        const BitString a = rng.bits(129);
        const BitString b = rng.bits(129);
        CHECK(hamming_fraction(a, b) == hamming_fraction(b, a));
    }
}

TEST_CASE("ascii encoding: first pulse leftmost, roundtrip exact") {
    const BitString b = BitString::from_string("10110");
    CHECK(b.bit(0) == 1);
    CHECK(b.bit(1) == 0);
    CHECK(b.to_string() == "10110");
    CHECK_THROWS_AS(BitString::from_string("01x1"), std::invalid_argument);
}

TEST_CASE("packed-byte encoding roundtrips with explicit bit length") {
    Rng rng(7, 3);
    for (const std::size_t len : {0u, 1u, 7u, 8u, 9u, 63u, 64u, 65u, 1000u}) {
        const BitString b = rng.bits(len);
        const auto bytes = b.to_packed_bytes();
        CHECK(bytes.size() == (len + 7) / 8);
        CHECK(BitString::from_packed_bytes(bytes, len) == b);
    }
    // bit k of byte j is bit 8j+k
    const BitString b = BitString::from_string("10000001");
    CHECK(b.to_packed_bytes() == std::vector<std::uint8_t>{0x81});
}

TEST_CASE("slice extracts a window") {
    const BitString b = BitString::from_string("11010011");
    CHECK(b.slice(2, 4) == BitString::from_string("0100"));
    CHECK(b.slice(0, 8) == b);
    CHECK(b.slice(8, 0).empty());
    CHECK_THROWS_AS(b.slice(5, 4), std::out_of_range);
}

TEST_CASE("shared secret splits into disjoint halves of one parent") {
    Rng rng(42, 0);
    const SharedSecret s = SharedSecret::generate(rng, 64);
    CHECK(s.parent().size() == 128);
    CHECK(s.half_length() == 64);
    CHECK(s.alice_half() == s.parent().slice(0, 64));
    CHECK(s.bob_half() == s.parent().slice(64, 64));
    CHECK_THROWS_AS(SharedSecret(BitString(5)), std::invalid_argument);
}

TEST_CASE("freshly drawn secret halves never collide at usable sizes") {
    Rng rng(1234, 0);
    for (int i = 0; i < 1000; ++i) {
        const SharedSecret s = SharedSecret::generate(rng, 64);
        CHECK_FALSE(s.halves_equal());
    }
}
