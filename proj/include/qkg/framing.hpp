#pragma once

#include "qkg/bitstring.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qkg {

/// Classical-channel message framing, so two processes can interoperate.
///
/// Wire layout, all integers little-endian:
///   u32  body length in bytes (everything after this prefix)
///   u64  session_id
///   u8   party            (0 = Alice, 1 = Bob)
///   u8   msg_type         (MsgType below)
///   u32  bit_length
///   u8[] payload          ceil(bit_length / 8) packed bytes, bit k of
///                         byte j is message bit 8*j + k

enum class MsgType : std::uint8_t {
    masked_bases = 1,
    clear_bases = 2,
    sacrifice_indices = 3, // bitmask over sifted positions
    sacrifice_values = 4,
    abort_notice = 5,
};

struct ChannelMessage {
    std::uint64_t session_id = 0;
    std::uint8_t party = 0;
    MsgType type = MsgType::masked_bases;
    BitString payload;

    bool operator==(const ChannelMessage& other) const = default;
};

class FramingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_message(const ChannelMessage& msg);

/// Decode one message starting at `offset`; advances `offset` past it.
/// Throws FramingError on truncation, bad msg_type, or a length field
/// inconsistent with the payload.
ChannelMessage decode_message(const std::vector<std::uint8_t>& buffer, std::size_t& offset);

inline ChannelMessage decode_message(const std::vector<std::uint8_t>& buffer) {
    std::size_t offset = 0;
    return decode_message(buffer, offset);
}

} // namespace qkg
