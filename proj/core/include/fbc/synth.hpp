#pragma once

#include "fbc/events.hpp"
#include "fbc/flow.hpp"

#include <string>
#include <vector>

namespace fbc {

// Piecewise-constant velocity: segments ordered by t_start_us, first at 0,
// each active until the next (the last until scene end).
struct MotionSegment {
    uint32_t t_start_us = 0;
    double vx = 0.0; // px/s
    double vy = 0.0;
};

struct Motion {
    enum class Kind { Piecewise, OscillateY };
    Kind kind = Kind::Piecewise;
    std::vector<MotionSegment> segments;
    // OscillateY: cy(t) = cy0 + amplitude * sin(2*pi*freq*t + phase), x fixed.
    double amplitude_px = 0.0;
    double freq_hz = 0.0;
    double phase_rad = 0.0;
};

// Solid axis-aligned rectangle. Pixel centers emit an event when an edge
// sweeps across them: ON when the pixel is covered, OFF when uncovered
// (swapped when invert_polarity is set).
struct SceneObject {
    std::string name;
    double cx0 = 0.0; // center at t = 0, px
    double cy0 = 0.0;
    double width_px = 0.0;
    double height_px = 0.0;
    Motion motion;
    bool invert_polarity = false;
};

struct SceneSpec {
    uint16_t width = 320;
    uint16_t height = 240;
    uint32_t duration_us = 2'000'000;
    double noise_rate_hz = 0.0; // uniform over the frame
    uint64_t seed = 0;
    std::vector<SceneObject> objects;
};

struct SynthResult {
    EventStream stream;
    GroundTruthFlow truth; // parallel to stream.events
};

// Deterministic for a given scene and seed. Throws on degenerate objects and
// motions faster than the 12-bit velocity ceiling.
SynthResult generate(const SceneSpec& scene);

// Uniform positions and per-component velocities in [-vel_range, vel_range],
// redrawn while the magnitude falls below v_min. Timestamps are all zero;
// callers place the batch relative to their own send_end.
std::vector<FlowEvent> generate_random_events(size_t n, double vel_range_px_s,
                                              uint16_t width, uint16_t height,
                                              uint64_t seed, double v_min = 1.0);

// Built-in scenes: "bar-square" (two objects oscillating vertically) and
// "const-velocity" (one rectangle translating at fixed speed).
SceneSpec preset_scene(const std::string& name, uint32_t duration_us, uint64_t seed);

// key=value scene description, one object per "object ..." line.
SceneSpec parse_scene_spec(const std::string& text);
SceneSpec load_scene_spec(const std::string& path);

} // namespace fbc
