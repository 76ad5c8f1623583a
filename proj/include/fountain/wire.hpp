#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fountain/packet.hpp"

namespace fountain {

inline constexpr std::uint8_t kWireMagic = 0xEC;
inline constexpr std::uint8_t kWireVersion = 0x01;
/// magic, version, scheme, k, B, header kind, header length.
inline constexpr std::size_t kFrameFixedBytes = 1 + 1 + 1 + 4 + 4 + 1 + 2;

/// Payload length a frame must carry: B, plus pad bytes for shifted packets.
std::size_t expected_payload_len(const CodedPacket& p);

std::vector<std::uint8_t> encode_header(const CodedPacket& p);

/// Throws UsageError for packets that cannot be framed (header too long,
/// header kind not matching the scheme, wrong payload length).
std::vector<std::uint8_t> serialize(const CodedPacket& p);

/// Parses exactly one frame; trailing bytes are a bad_header error.
CodedPacket deserialize(std::span<const std::uint8_t> bytes);

/// Parses the frame starting at `offset` and advances it past the frame.
CodedPacket read_frame(std::span<const std::uint8_t> bytes, std::size_t& offset);

std::vector<std::uint8_t> serialize_stream(std::span<const CodedPacket> packets);
std::vector<CodedPacket> deserialize_stream(std::span<const std::uint8_t> bytes);

}  // namespace fountain
