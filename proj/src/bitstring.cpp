#include "qkg/bitstring.hpp"
#include "qkg/rng.hpp"

#include <bit>
#include <iostream>
#include <stdexcept>

namespace qkg {

BitString BitString::from_string(std::string_view ascii) {
    BitString out(ascii.size());
    for (std::size_t i = 0; i < ascii.size(); ++i) {
        const char c = ascii[i];
        if (c == '1')
            out.set_bit(i, 1);
        else if (c != '0')
            throw std::invalid_argument("BitString::from_string: character is not '0' or '1'");
    }
    return out;
}

BitString BitString::from_bools(const std::vector<std::uint8_t>& bits) {
    BitString out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out.set_bit(i, 1);
    return out;
}

BitString BitString::from_packed_bytes(const std::vector<std::uint8_t>& bytes,
                                       std::size_t bit_length) {
    if (bytes.size() < (bit_length + 7) / 8)
        throw std::invalid_argument("BitString::from_packed_bytes: buffer shorter than bit length");
    BitString out(bit_length);
    for (std::size_t i = 0; i < bit_length; ++i)
        if ((bytes[i >> 3] >> (i & 7)) & 1u) out.set_bit(i, 1);
    return out;
}

std::size_t BitString::count_ones() const {
    std::size_t total = 0;
    for (const std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

BitString BitString::slice(std::size_t start, std::size_t count) const {
    if (start + count > length_)
        throw std::out_of_range("BitString::slice: range exceeds length");
    BitString out(count);
    for (std::size_t i = 0; i < count; ++i)
        if (bit(start + i)) out.set_bit(i, 1);
    return out;
}

std::string BitString::to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i)
        if (bit(i)) s[i] = '1';
    return s;
}

std::vector<std::uint8_t> BitString::to_packed_bytes() const {
    std::vector<std::uint8_t> bytes((length_ + 7) / 8, 0);
    for (std::size_t i = 0; i < length_; ++i)
        if (bit(i)) bytes[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
    return bytes;
}

BitString& BitString::operator^=(const BitString& other) {
    if (length_ != other.length_)
        throw std::invalid_argument("xor_mask: length mismatch");
    // tail bits are zero in both operands, so word-wise xor preserves the invariant
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
}

BitString xor_mask(const BitString& data, const BitString& mask) {
    BitString out = data;
    out ^= mask;
    return out;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t total = 0;
    for (std::size_t w = 0; w < a.words().size(); ++w)
        total += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
    return total;
}

double hamming_fraction(const BitString& a, const BitString& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hamming_fraction: empty input");
    return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

SharedSecret::SharedSecret(BitString parent, std::size_t cursor)
    : parent_(std::move(parent)), cursor_(cursor) {
    if (parent_.size() % 2 != 0)
        throw std::invalid_argument("SharedSecret: parent length must be even");
    if (parent_.size() > 0) cursor_ %= parent_.size();
}

SharedSecret SharedSecret::generate(Rng& rng, std::size_t n) {
    SharedSecret s(rng.bits(2 * n));
    if (n > 0 && s.halves_equal())
        std::cerr << "warning: shared-secret halves collided; protocol requires distinct halves\n";
    return s;
}

} // namespace qkg
