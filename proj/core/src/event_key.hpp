#pragma once

// Internal: events packed into 61-bit sort keys, ordered exactly like
// event_less. Shared by the sorter and the receiver's batch path so large
// prediction batches can be generated, sorted, and unpacked without an
// extra conversion pass.

#include "fbc/events.hpp"

#include <cstdint>
#include <vector>

namespace fbc::detail {

inline uint64_t event_key(const Event& e) {
    return (static_cast<uint64_t>(e.t) << 29) | (static_cast<uint64_t>(e.y) << 15) |
           (static_cast<uint64_t>(e.x) << 1) | static_cast<uint64_t>(e.p);
}

inline Event event_from_key(uint64_t k) {
    Event e;
    e.t = static_cast<uint32_t>(k >> 29);
    e.y = static_cast<uint16_t>((k >> 15) & 0x3fff);
    e.x = static_cast<uint16_t>((k >> 1) & 0x3fff);
    e.p = static_cast<Polarity>(k & 1);
    return e;
}

void radix_sort_keys(std::vector<uint64_t>& keys);

} // namespace fbc::detail
