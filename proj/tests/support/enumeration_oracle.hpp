#pragma once

#include "qkg/bitstring.hpp"

#include <cstdint>

namespace qkg::testing {

// Literal subset enumerator: walks every C(n, m) position selection and
// checks whether it reproduces the target. Independent of the
// dynamic-programming counter it oracles; only usable at small n.
inline std::uint64_t enumerate_consistent_selections(const BitString& raw,
                                                     const BitString& target) {
    const std::size_t n = raw.size();
    const std::size_t m = target.size();
    if (m > n) return 0;
    if (m == 0) return 1;

    std::uint64_t count = 0;
    // Gosper's hack over n-bit masks with popcount m
    const std::uint64_t limit = std::uint64_t{1} << n;
    std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    while (mask < limit) {
        std::size_t j = 0;
        bool consistent = true;
        for (std::size_t i = 0; i < n && consistent; ++i) {
            if ((mask >> i) & 1u) {
                if (raw.bit(i) != target.bit(j)) consistent = false;
                ++j;
            }
        }
        if (consistent) ++count;

        const std::uint64_t c = mask & (~mask + 1);
        const std::uint64_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    return count;
}

} // namespace qkg::testing
