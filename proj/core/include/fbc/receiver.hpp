#pragma once

#include "fbc/events.hpp"
#include "fbc/wire.hpp"

#include <cstdint>
#include <vector>

namespace fbc {

// Integer pixel offset relative to a flow event's origin pixel.
struct CandidatePixel {
    int32_t xp = 0;
    int32_t yp = 0;
    bool operator==(const CandidatePixel&) const = default;
};

// Thickened Bresenham line from (x0,y0) to (x1,y1), start pixel excluded,
// duplicates removed. Integer arithmetic only. The set is a superset of
// every pixel whose distance from the continuous segment is < 0.5*sqrt(2),
// which is what makes it a safe candidate list for slack values <= 0.5.
std::vector<CandidatePixel> modified_bresenham(int32_t x0, int32_t y0,
                                               int32_t x1, int32_t y1);

// Time of closest approach of the subpixel trajectory t -> (vx*t, vy*t)
// to the pixel line at (xp, yp), in seconds. Throws when vx = vy = 0.
double t_min_seconds(double vx, double vy, double xp, double yp);

// Squared distance between trajectory and pixel line at time t, px^2.
double min_dist_sq(double vx, double vy, double xp, double yp, double t);

struct PredictionWindow {
    uint32_t send_end_us = 0;
    uint32_t predict_time_us = 0;
};

// Closed-form prediction of the events one flow event generates inside
// (send_end, send_end + PT]. Requires |v| > 0 and fe.event.t <= send_end;
// both hold for anything the transmitter emits.
std::vector<Event> predict_events(const FlowEvent& fe, const PredictionWindow& win,
                                  double pixel_slack, uint16_t sensor_width,
                                  uint16_t sensor_height);

// Maps predict_events over flow_events on `parallelism` threads and returns
// the merged, fully sorted batch. Output is identical for every parallelism
// degree.
std::vector<Event> rx_predict_batch(const std::vector<FlowEvent>& flow_events,
                                    const PredictionWindow& win, double pixel_slack,
                                    uint16_t sensor_width, uint16_t sensor_height,
                                    unsigned parallelism);

// The prediction phase alone (no final sort), in deterministic input order.
// Callers that interleave sorting with other work (micro-batching, latency
// measurement) sort the result themselves.
std::vector<Event> rx_predict_batch_unsorted(
    const std::vector<FlowEvent>& flow_events, const PredictionWindow& win,
    double pixel_slack, uint16_t sensor_width, uint16_t sensor_height,
    unsigned parallelism);

enum class SortMode {
    PerWindow,  // one sort per predicting window
    MicroBatch, // fixed-interval micro-batch sorts, same final ordering
};

struct ReceiverOptions {
    unsigned parallelism = 1;
    SortMode sort_mode = SortMode::PerWindow;
    uint32_t microbatch_us = 1000;
};

// Replays a packet stream into the reconstructed event stream: transmitted
// events pass through, flow events additionally seed predictions at each
// SendEnd, buffers are cleared at the next SendStart. Throws fbc::Error
// (naming the packet index) on phase-sequence violations.
EventStream reconstruct(const std::vector<Packet>& packets, const CodecConfig& cfg,
                        const ReceiverOptions& options = {});

} // namespace fbc
