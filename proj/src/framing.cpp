#include "qkg/framing.hpp"

#include <limits>

namespace qkg {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) |
           (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint64_t get_u64(const std::vector<std::uint8_t>& b, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[at + static_cast<std::size_t>(i)];
    return v;
}

bool valid_type(std::uint8_t t) {
    return t >= static_cast<std::uint8_t>(MsgType::masked_bases) &&
           t <= static_cast<std::uint8_t>(MsgType::abort_notice);
}

} // namespace

std::vector<std::uint8_t> encode_message(const ChannelMessage& msg) {
    if (msg.payload.size() > std::numeric_limits<std::uint32_t>::max())
        throw FramingError("encode_message: payload exceeds 32-bit bit_length");
    const std::vector<std::uint8_t> packed = msg.payload.to_packed_bytes();
    const std::size_t body = 8 + 1 + 1 + 4 + packed.size();

    std::vector<std::uint8_t> out;
    out.reserve(4 + body);
    put_u32(out, static_cast<std::uint32_t>(body));
    put_u64(out, msg.session_id);
    out.push_back(msg.party);
    out.push_back(static_cast<std::uint8_t>(msg.type));
    put_u32(out, static_cast<std::uint32_t>(msg.payload.size()));
    out.insert(out.end(), packed.begin(), packed.end());
    return out;
}

ChannelMessage decode_message(const std::vector<std::uint8_t>& buffer, std::size_t& offset) {
    if (buffer.size() - offset < 4) throw FramingError("decode_message: truncated length prefix");
    const std::uint32_t body = get_u32(buffer, offset);
    if (body < 14) throw FramingError("decode_message: body shorter than fixed header");
    if (buffer.size() - offset - 4 < body) throw FramingError("decode_message: truncated body");

    const std::size_t base = offset + 4;
    ChannelMessage msg;
    msg.session_id = get_u64(buffer, base);
    msg.party = buffer[base + 8];
    const std::uint8_t raw_type = buffer[base + 9];
    if (!valid_type(raw_type)) throw FramingError("decode_message: unknown msg_type");
    msg.type = static_cast<MsgType>(raw_type);
    const std::uint32_t bit_length = get_u32(buffer, base + 10);
    const std::size_t payload_bytes = (static_cast<std::size_t>(bit_length) + 7) / 8;
    if (body != 14 + payload_bytes)
        throw FramingError("decode_message: length field inconsistent with bit_length");

    std::vector<std::uint8_t> packed(buffer.begin() + static_cast<std::ptrdiff_t>(base + 14),
                                     buffer.begin() +
                                         static_cast<std::ptrdiff_t>(base + 14 + payload_bytes));
    msg.payload = BitString::from_packed_bytes(packed, bit_length);
    offset = base + body;
    return msg;
}

} // namespace qkg
