#include "qkg/rng.hpp"

#include <bit>
#include <stdexcept>

namespace qkg {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::uniform_index: bound must be positive");
    if ((bound & (bound - 1)) == 0) return engine_() & (bound - 1);
    const int shift = std::countl_zero(bound - 1);
    const std::uint64_t mask = ~std::uint64_t{0} >> shift;
    std::uint64_t v;
    do {
        v = engine_() & mask;
    } while (v >= bound);
    return v;
}

BitString Rng::bits(std::size_t count) {
    BitString out(count);
    for (std::size_t i = 0; i < count; i += 64) {
        const std::uint64_t w = engine_();
        const std::size_t remaining = count - i;
        if (remaining >= 64) {
            for (int k = 0; k < 64; ++k)
                if ((w >> k) & 1u) out.set_bit(i + k, 1);
        } else {
            for (std::size_t k = 0; k < remaining; ++k)
                if ((w >> k) & 1u) out.set_bit(i + k, 1);
        }
    }
    return out;
}

BitString random_bits(Rng& rng, std::size_t count) { return rng.bits(count); }

} // namespace qkg
