#pragma once

#include "fbc/events.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fbc {

// State-control markers. The wire stream alternates
// SendStart, payload, SendEnd, payload, SendStart, ...
struct SendStart {
    uint32_t t = 0; // us
    bool operator==(const SendStart&) const = default;
};

struct SendEnd {
    uint32_t t = 0;               // us
    uint32_t predict_time_us = 0; // carried on the wire at 1 ms resolution
    bool operator==(const SendEnd&) const = default;
};

using Packet = std::variant<Event, FlowEvent, SendStart, SendEnd>;

inline constexpr size_t kPlainEventBytes = 8;
inline constexpr size_t kFlowEventBytes = 11;
inline constexpr size_t kMarkerBytes = 8;

// Record layout, one little-endian 64-bit word per record:
//   bits 0-31  t (us)
//   bits 32-45 x (14 bits)
//   bits 46-59 y (14 bits)
//   bit  60    polarity
//   bits 61-63 tag
// Tag 0: plain event. Tag 1: flow event; a 24-bit little-endian field
// follows with qvx in bits 0-11 and qvy in bits 12-23 (two's complement,
// 1 px/s units). Tag 6: SendStart. Tag 7: SendEnd, with PT in ms stored
// in the x field. Tags 2-5 are reserved.
inline constexpr uint8_t kTagPlain = 0;
inline constexpr uint8_t kTagFlow = 1;
inline constexpr uint8_t kTagSendStart = 6;
inline constexpr uint8_t kTagSendEnd = 7;

// Round-to-nearest at 1 px/s, clamped to the signed 12-bit range.
int16_t quantize_velocity(double v);

// Appends the serialized record(s) to out. Throws fbc::Error when a field
// does not fit the layout (x or y >= 2^14, SendEnd PT not a whole ms or
// >= 2^14 ms).
void encode_packet(const Packet& pkt, std::vector<uint8_t>& out);
std::vector<uint8_t> encode_packets(const std::vector<Packet>& packets);

struct DecodeError {
    size_t offset = 0; // byte offset of the offending record
    std::string reason;
};

struct DecodeResult {
    std::vector<Packet> packets;
    size_t consumed = 0; // bytes of well-formed records
    std::optional<DecodeError> error;

    bool ok() const { return !error.has_value(); }
};

// Parses packets in order, stopping at the first malformed or truncated
// record. Packets decoded before the error are kept.
DecodeResult decode_packets(const uint8_t* data, size_t size);
DecodeResult decode_packets(const std::vector<uint8_t>& bytes);

// Byte accounting for the compression-ratio model: control markers are
// excluded, plain events cost 8 bytes and flow events 11.
struct PayloadStats {
    uint64_t bytes = 0;
    uint64_t n_tx = 0; // transmitted events (plain + flow)
    uint64_t n_nf = 0; // of those, events without flow
};
PayloadStats payload_byte_count(const std::vector<Packet>& packets);

} // namespace fbc
