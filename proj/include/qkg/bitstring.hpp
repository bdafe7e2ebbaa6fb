#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qkg {

/// Fixed-length sequence of bits, packed into 64-bit words.
///
/// Carries basis lists, key values, shared-secret halves and classical
/// messages. The length is fixed at construction; treat values as
/// immutable once shared across threads. Unused high bits of the last
/// word are kept zero so word-level operations (xor, popcount) stay exact.
class BitString {
public:
    BitString() = default;

    /// All-zero string of `length` bits.
    explicit BitString(std::size_t length)
        : words_((length + 63) / 64, 0), length_(length) {}

    static BitString from_string(std::string_view ascii);
    static BitString from_bools(const std::vector<std::uint8_t>& bits);

    /// Decode the canonical binary form: little-endian packed bytes
    /// (bit k of byte j is bit 8*j+k) plus an explicit bit length.
    static BitString from_packed_bytes(const std::vector<std::uint8_t>& bytes,
                                       std::size_t bit_length);

    std::size_t size() const { return length_; }
    bool empty() const { return length_ == 0; }

    int bit(std::size_t i) const {
        return static_cast<int>((words_[i >> 6] >> (i & 63)) & 1u);
    }

    void set_bit(std::size_t i, int value) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void flip_bit(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t count_ones() const;
    bool all_zero() const { return count_ones() == 0; }

    BitString slice(std::size_t start, std::size_t count) const;

    /// ASCII '0'/'1', first bit (pulse 0) leftmost.
    std::string to_string() const;
    std::vector<std::uint8_t> to_packed_bytes() const;

    const std::vector<std::uint64_t>& words() const { return words_; }

    BitString& operator^=(const BitString& other);

    bool operator==(const BitString& other) const = default;

private:
    std::vector<std::uint64_t> words_;
    std::size_t length_ = 0;
};

/// result[i] = data[i] XOR mask[i]; throws std::invalid_argument on
/// length mismatch (never truncates).
BitString xor_mask(const BitString& data, const BitString& mask);

inline BitString operator^(const BitString& a, const BitString& b) { return xor_mask(a, b); }

/// Number of differing positions. Lengths must match.
std::size_t hamming_distance(const BitString& a, const BitString& b);

/// Fraction of differing positions in [0,1]. Inputs must be non-empty
/// and of equal length.
double hamming_fraction(const BitString& a, const BitString& b);

class Rng;

/// Preshared 2n-bit secret. The first half masks Alice's basis message,
/// the second half masks Bob's. `cursor` tracks where the next refresh
/// window starts so successive refreshes rotate over all 2n positions.
class SharedSecret {
public:
    SharedSecret() = default;
    explicit SharedSecret(BitString parent, std::size_t cursor = 0);

    /// Draw a fresh 2n-bit secret. Warns on the (astronomically rare)
    /// event that both halves coincide, which the protocol forbids.
    static SharedSecret generate(Rng& rng, std::size_t n);

    std::size_t half_length() const { return parent_.size() / 2; }
    BitString alice_half() const { return parent_.slice(0, half_length()); }
    BitString bob_half() const { return parent_.slice(half_length(), half_length()); }
    const BitString& parent() const { return parent_; }
    std::size_t cursor() const { return cursor_; }

    bool halves_equal() const { return alice_half() == bob_half(); }

    bool operator==(const SharedSecret& other) const = default;

private:
    BitString parent_;
    std::size_t cursor_ = 0;
};

} // namespace qkg
