#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fbc {

enum class Polarity : uint8_t { Off = 0, On = 1 };

// One sensor spike. Timestamps are integer microseconds; streams are
// expected to stay below 2^32 us (wraparound is not handled).
struct Event {
    uint16_t x = 0;
    uint16_t y = 0;
    uint32_t t = 0; // microseconds
    Polarity p = Polarity::Off;

    bool operator==(const Event&) const = default;
};

// Total order on events: time, then y, x, polarity. Sorting with this
// comparator yields the same sequence for any permutation of the same
// multiset, which is what the reconstruction determinism contract needs.
inline bool event_less(const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return static_cast<uint8_t>(a.p) < static_cast<uint8_t>(b.p);
}

void sort_events(std::vector<Event>& events);

// Event plus a velocity estimate on the focal plane, pixels/second.
struct FlowEvent {
    Event event;
    double vx = 0.0;
    double vy = 0.0;

    bool operator==(const FlowEvent&) const = default;
};

double flow_magnitude(double vx, double vy);
double flow_magnitude(const FlowEvent& fe);

struct CodecConfig {
    uint32_t predict_time_us = 30000;     // PT
    double pixel_slack = 0.4;             // xi
    uint32_t calibration_count = 500;     // C, flow samples per ST update
    uint32_t initial_send_time_us = 10000; // ST before the first calibration
    uint16_t sensor_width = 640;
    uint16_t sensor_height = 480;
    double v_min = 1.0;    // px/s; slower flow is demoted to a plain event
    double v_max = 2047.0; // px/s; fits 12-bit wire quantization
};

struct EventStream {
    uint16_t width = 0;
    uint16_t height = 0;
    std::vector<Event> events;
};

struct StreamViolation {
    size_t index = 0;
    std::string rule;
};

// Checks bounds and temporal ordering. Violations are data, not failures.
std::vector<StreamViolation> validate_stream(const EventStream& stream);

} // namespace fbc
