#include "qkg/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace qkg;

TEST_CASE("zero-length request yields the empty string") {
    Rng rng(42, 0);
    CHECK(random_bits(rng, 0).empty());
}

TEST_CASE("identical (seed, stream) reproduces identical bits") {
    Rng a(42, 0);
    Rng b(42, 0);
    CHECK(random_bits(a, 4096) == random_bits(b, 4096));

    Rng c(42, 1); // different stream diverges
    Rng d(42, 0);
    CHECK(random_bits(c, 4096) != random_bits(d, 4096));
    Rng e(43, 0); // different seed diverges
    Rng f(42, 0);
    CHECK(random_bits(e, 4096) != random_bits(f, 4096));
}

TEST_CASE("frequency test: ones fraction within the 3-sigma binomial band") {
    // spec band for 1e6 draws: [0.497, 0.503]
    Rng rng(42, 0);
    const BitString big = random_bits(rng, 1000000);
    const double ones = static_cast<double>(big.count_ones()) / 1e6;
    CHECK(ones > 0.497);
    CHECK(ones < 0.503);

    for (const std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
        for (const std::size_t count : {10000u, 40000u}) {
            Rng r(seed, 7);
            const BitString s = random_bits(r, count);
            const double frac = static_cast<double>(s.count_ones()) / static_cast<double>(count);
            CHECK(std::abs(frac - 0.5) < 3.0 * std::sqrt(0.25 / static_cast<double>(count)));
        }
    }
}

TEST_CASE("bit() stream is deterministic and roughly balanced") {
    Rng a(7, 0);
    Rng b(7, 0);
    int ones = 0;
    for (int i = 0; i < 100000; ++i) {
        const int bit = a.bit();
        CHECK(bit == b.bit());
        ones += bit;
    }
    CHECK(std::abs(ones / 100000.0 - 0.5) < 3.0 * std::sqrt(0.25 / 100000.0));
}

TEST_CASE("uniform_index covers the range without bias artifacts") {
    Rng rng(3, 0);
    CHECK_THROWS(rng.uniform_index(0));
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t v = rng.uniform_index(10);
        REQUIRE(v < 10);
        ++counts[static_cast<std::size_t>(v)];
    }
    // each bucket ~ Binomial(1e5, 0.1): 3 sigma ~ 285
    for (const int c : counts) CHECK(std::abs(c - draws / 10) < 3 * 95);
}
