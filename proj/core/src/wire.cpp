#include "fbc/wire.hpp"

#include "fbc/error.hpp"

#include <cmath>

namespace fbc {

namespace {

constexpr uint64_t kFieldMax14 = 1ull << 14;

uint64_t pack_word(uint32_t t, uint16_t x, uint16_t y, uint8_t p, uint8_t tag) {
    return static_cast<uint64_t>(t)
         | (static_cast<uint64_t>(x) << 32)
         | (static_cast<uint64_t>(y) << 46)
         | (static_cast<uint64_t>(p & 1) << 60)
         | (static_cast<uint64_t>(tag & 7) << 61);
}

void append_le(uint64_t word, size_t n_bytes, std::vector<uint8_t>& out) {
    for (size_t i = 0; i < n_bytes; ++i) {
        out.push_back(static_cast<uint8_t>(word >> (8 * i)));
    }
}

uint64_t read_le(const uint8_t* data, size_t n_bytes) {
    uint64_t word = 0;
    for (size_t i = 0; i < n_bytes; ++i) {
        word |= static_cast<uint64_t>(data[i]) << (8 * i);
    }
    return word;
}

void check_xy(uint16_t x, uint16_t y) {
    if (x >= kFieldMax14 || y >= kFieldMax14) {
        throw Error("event coordinates exceed the 14-bit wire field");
    }
}

int16_t sign_extend_12(uint32_t raw) {
    raw &= 0xfff;
    return static_cast<int16_t>(raw & 0x800 ? static_cast<int32_t>(raw) - 4096
                                            : static_cast<int32_t>(raw));
}

} // namespace

int16_t quantize_velocity(double v) {
    long q = std::lround(v);
    if (q < -2048) q = -2048;
    if (q > 2047) q = 2047;
    return static_cast<int16_t>(q);
}

void encode_packet(const Packet& pkt, std::vector<uint8_t>& out) {
    if (const Event* e = std::get_if<Event>(&pkt)) {
        check_xy(e->x, e->y);
        append_le(pack_word(e->t, e->x, e->y, static_cast<uint8_t>(e->p), kTagPlain),
                  kPlainEventBytes, out);
    } else if (const FlowEvent* fe = std::get_if<FlowEvent>(&pkt)) {
        const Event& e = fe->event;
        check_xy(e.x, e.y);
        append_le(pack_word(e.t, e.x, e.y, static_cast<uint8_t>(e.p), kTagFlow),
                  kPlainEventBytes, out);
        const uint32_t qvx = static_cast<uint16_t>(quantize_velocity(fe->vx)) & 0xfff;
        const uint32_t qvy = static_cast<uint16_t>(quantize_velocity(fe->vy)) & 0xfff;
        append_le(qvx | (qvy << 12), 3, out);
    } else if (const SendStart* s = std::get_if<SendStart>(&pkt)) {
        append_le(pack_word(s->t, 0, 0, 0, kTagSendStart), kMarkerBytes, out);
    } else {
        const SendEnd& se = std::get<SendEnd>(pkt);
        if (se.predict_time_us % 1000 != 0) {
            throw Error("SendEnd predict time is carried at 1 ms resolution");
        }
        const uint32_t pt_ms = se.predict_time_us / 1000;
        if (pt_ms >= kFieldMax14) {
            throw Error("SendEnd predict time exceeds the 14-bit wire field");
        }
        append_le(pack_word(se.t, static_cast<uint16_t>(pt_ms), 0, 0, kTagSendEnd),
                  kMarkerBytes, out);
    }
}

std::vector<uint8_t> encode_packets(const std::vector<Packet>& packets) {
    std::vector<uint8_t> out;
    for (const Packet& p : packets) {
        encode_packet(p, out);
    }
    return out;
}

DecodeResult decode_packets(const uint8_t* data, size_t size) {
    DecodeResult result;
    size_t offset = 0;
    while (offset < size) {
        if (size - offset < kMarkerBytes) {
            result.error = DecodeError{offset, "truncated record"};
            return result;
        }
        const uint64_t word = read_le(data + offset, 8);
        const uint8_t tag = static_cast<uint8_t>(word >> 61);
        const uint32_t t = static_cast<uint32_t>(word);
        const uint16_t x = static_cast<uint16_t>((word >> 32) & 0x3fff);
        const uint16_t y = static_cast<uint16_t>((word >> 46) & 0x3fff);
        const Polarity p = static_cast<Polarity>((word >> 60) & 1);

        switch (tag) {
        case kTagPlain:
            result.packets.emplace_back(Event{x, y, t, p});
            offset += kPlainEventBytes;
            break;
        case kTagFlow: {
            if (size - offset < kFlowEventBytes) {
                result.error = DecodeError{offset, "truncated flow record"};
                return result;
            }
            const uint64_t flow = read_le(data + offset + 8, 3);
            FlowEvent fe;
            fe.event = Event{x, y, t, p};
            fe.vx = sign_extend_12(static_cast<uint32_t>(flow & 0xfff));
            fe.vy = sign_extend_12(static_cast<uint32_t>((flow >> 12) & 0xfff));
            result.packets.emplace_back(fe);
            offset += kFlowEventBytes;
            break;
        }
        case kTagSendStart:
            result.packets.emplace_back(SendStart{t});
            offset += kMarkerBytes;
            break;
        case kTagSendEnd:
            result.packets.emplace_back(SendEnd{t, static_cast<uint32_t>(x) * 1000});
            offset += kMarkerBytes;
            break;
        default:
            result.error = DecodeError{offset, "unknown record tag " + std::to_string(tag)};
            return result;
        }
        result.consumed = offset;
    }
    return result;
}

DecodeResult decode_packets(const std::vector<uint8_t>& bytes) {
    return decode_packets(bytes.data(), bytes.size());
}

PayloadStats payload_byte_count(const std::vector<Packet>& packets) {
    PayloadStats stats;
    for (const Packet& p : packets) {
        if (std::holds_alternative<Event>(p)) {
            ++stats.n_tx;
            ++stats.n_nf;
        } else if (std::holds_alternative<FlowEvent>(p)) {
            ++stats.n_tx;
        }
    }
    stats.bytes = kPlainEventBytes * stats.n_nf
                + kFlowEventBytes * (stats.n_tx - stats.n_nf);
    return stats;
}

} // namespace fbc
