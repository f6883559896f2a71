#pragma once

#include "fbc/events.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace fbc {

// Per-pixel, per-polarity map of the most recent event timestamp.
// Single-writer: events are applied in stream order.
class TimeSurface {
public:
    TimeSurface(uint16_t width, uint16_t height);

    // Sets last_ts[p][y][x] = t. Throws fbc::Error for out-of-bounds events.
    void apply(const Event& e);

    // -1 when the pixel has not fired on that polarity channel yet.
    int64_t last_ts(Polarity p, uint16_t x, uint16_t y) const {
        return planes_[static_cast<size_t>(p)][static_cast<size_t>(y) * width_ + x];
    }

    uint16_t width() const { return width_; }
    uint16_t height() const { return height_; }

private:
    uint16_t width_;
    uint16_t height_;
    std::vector<int64_t> planes_[2];
};

struct FlowEstimate {
    double vx = 0.0; // px/s
    double vy = 0.0;
    bool valid = false;
    // Spatial scatter of the support around the fitted plane, px.
    double residual = 0.0;
};

struct PlaneFitParams {
    int window_radius = 3;        // Chebyshev, px
    uint32_t dt_max_us = 50000;   // support must be this recent
    int min_support = 8;          // pixels
    double residual_max_px = 0.75;
    double v_min = 1.0;
    double v_max = 2047.0;
};

// Least-squares fit of t = a*x + b*y + c over the neighborhood of e on its
// polarity channel; velocity is (a, b) / (a^2 + b^2) converted to px/s.
// The event itself must already be applied to the surface.
FlowEstimate plane_fit_flow(const TimeSurface& surface, const Event& e,
                            const PlaneFitParams& params);

// Per-event ground-truth velocity attached to a synthetic stream,
// parallel to EventStream::events.
struct GroundTruth {
    double vx = 0.0;
    double vy = 0.0;
    bool noise = false;
};
using GroundTruthFlow = std::vector<GroundTruth>;

// Produces one estimate per stream event, in stream order.
class FlowProvider {
public:
    virtual ~FlowProvider() = default;
    virtual FlowEstimate estimate(const Event& e, size_t index) = 0;
};

class PlaneFitFlowProvider : public FlowProvider {
public:
    PlaneFitFlowProvider(uint16_t width, uint16_t height, PlaneFitParams params)
        : surface_(width, height), params_(params) {}

    FlowEstimate estimate(const Event& e, size_t index) override;

private:
    TimeSurface surface_;
    PlaneFitParams params_;
};

// Looks up the generator's ground truth; noise events and events outside
// the magnitude gate come back invalid.
class OracleFlowProvider : public FlowProvider {
public:
    OracleFlowProvider(GroundTruthFlow truth, double v_min, double v_max)
        : truth_(std::move(truth)), v_min_(v_min), v_max_(v_max) {}

    FlowEstimate estimate(const Event& e, size_t index) override;

private:
    GroundTruthFlow truth_;
    double v_min_;
    double v_max_;
};

} // namespace fbc
