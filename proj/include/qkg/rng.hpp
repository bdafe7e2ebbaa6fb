#pragma once

#include "qkg/bitstring.hpp"

#include <cstdint>
#include <random>

namespace qkg {

/// Seedable deterministic random source.
///
/// One instance per (seed, stream) pair; identical pairs reproduce the
/// identical draw sequence across runs and platforms (mt19937_64 is
/// fully specified by the standard, and no implementation-defined
/// distribution adapters are used). Distinct streams are statistically
/// independent. Single-owner: hand parallel workers their own streams.
///
/// This is a simulation RNG, not a cryptographic one; reproducibility
/// is the design goal.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// One uniform bit. Buffered 64 at a time from the engine.
    int bit() {
        if (bits_left_ == 0) {
            bit_buffer_ = engine_();
            bits_left_ = 64;
        }
        const int b = static_cast<int>(bit_buffer_ & 1u);
        bit_buffer_ >>= 1;
        --bits_left_;
        return b;
    }

    /// Full 64-bit word straight from the engine (does not touch the
    /// bit buffer).
    std::uint64_t word() { return engine_(); }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); bound must be positive.
    /// Masked rejection sampling, so the result is unbiased and
    /// platform-independent.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// `count` uniform bits as a BitString; reproducible per handle.
    BitString bits(std::size_t count);

    /// Derive the conventional per-session stream id used by the
    /// experiment drivers: one block of stream ids per session.
    static std::uint64_t session_stream(std::uint64_t session_index, std::uint64_t role) {
        return session_index * kStreamsPerSession + role;
    }

    static constexpr std::uint64_t kStreamsPerSession = 8;
    // role labels within a session block
    static constexpr std::uint64_t kRoleAlice = 0;
    static constexpr std::uint64_t kRoleBob = 1;
    static constexpr std::uint64_t kRoleEve = 2;
    static constexpr std::uint64_t kRoleEstimation = 3;
    static constexpr std::uint64_t kRoleSecret = 4;
    static constexpr std::uint64_t kRoleTamper = 5;
    static constexpr std::uint64_t kRoleGuess = 6;

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t bit_buffer_ = 0;
    int bits_left_ = 0;
};

/// BitString of `count` uniform bits drawn from `rng`.
BitString random_bits(Rng& rng, std::size_t count);

} // namespace qkg
