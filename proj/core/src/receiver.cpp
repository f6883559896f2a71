#include "fbc/receiver.hpp"

#include "fbc/error.hpp"

#include "event_key.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace fbc {

std::vector<CandidatePixel> modified_bresenham(int32_t x0, int32_t y0,
                                               int32_t x1, int32_t y1) {
    const int32_t x_dist = std::abs(x1 - x0);
    const int32_t y_dist = -std::abs(y1 - y0);
    const int32_t x_step = x0 < x1 ? 1 : -1;
    const int32_t y_step = y0 < y1 ? 1 : -1;
    int64_t error = x_dist + y_dist;

    std::vector<CandidatePixel> coords;
    coords.reserve(static_cast<size_t>(2 * (x_dist - y_dist)) + 4);
    while (x0 != x1 || y0 != y1) {
        if (2 * error - y_dist > x_dist - 2 * error) {
            error += y_dist;
            x0 += x_step;
            coords.push_back({x0, y0});
            coords.push_back({x0 - x_step, y0 + y_step});
        } else {
            error += x_dist;
            y0 += y_step;
            coords.push_back({x0, y0});
            coords.push_back({x0 + x_step, y0 - y_step});
        }
    }

    // The two appends per step overlap between iterations; duplicates would
    // double-predict a pixel at the same t_min.
    std::sort(coords.begin(), coords.end(),
              [](const CandidatePixel& a, const CandidatePixel& b) {
                  return a.xp != b.xp ? a.xp < b.xp : a.yp < b.yp;
              });
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    return coords;
}

double t_min_seconds(double vx, double vy, double xp, double yp) {
    const double v2 = vx * vx + vy * vy;
    if (v2 <= 0.0) {
        throw Error("t_min is undefined for zero velocity");
    }
    return (vx * xp + vy * yp) / v2;
}

double min_dist_sq(double vx, double vy, double xp, double yp, double t) {
    const double dx = vx * t - xp;
    const double dy = vy * t - yp;
    return dx * dx + dy * dy;
}

namespace {

// Round half away from zero without the libm call; hot-path predictions
// round ~1e6 values per batch.
inline int64_t fast_round(double x) {
    return static_cast<int64_t>(x >= 0.0 ? x + 0.5 : x - 0.5);
}

// Candidate walk along the continuous trajectory segment from the origin to
// (vx, vy) * duration: one step at a time on the major axis, taking the
// three pixels straddling the segment on the minor axis, one step past both
// ends. Every pixel within 0.5 px of the segment has a minor-axis offset
// below 1.5 from the rounded segment coordinate, so the walk cannot miss a
// candidate for slack values up to 0.5. The thickened Bresenham line over
// the ceil'd integer endpoint does not have that guarantee: rounding the
// endpoint skews the rasterized direction away from the true trajectory by
// up to one pixel over the segment length.
//
// This is the receiver's hot loop; candidates are gated and emitted in
// place instead of materializing a candidate list.
template <typename Emit>
void predict_events_into(const FlowEvent& fe, const PredictionWindow& win,
                         double pixel_slack, uint16_t sensor_width,
                         uint16_t sensor_height, Emit&& emit) {
    const double vx = fe.vx;
    const double vy = fe.vy;
    const double v2 = vx * vx + vy * vy;
    if (v2 <= 0.0) {
        throw Error("prediction requires nonzero velocity");
    }
    const double inv_v2 = 1.0 / v2;

    const double send_end = static_cast<double>(win.send_end_us);
    const double stop_time = send_end + static_cast<double>(win.predict_time_us);
    const double duration_s = (stop_time - static_cast<double>(fe.event.t)) * 1e-6;
    const double slack_sq = pixel_slack * pixel_slack;
    const double t0 = static_cast<double>(fe.event.t);

    const double ex = vx * duration_s;
    const double ey = vy * duration_s;
    const bool x_major = std::abs(ex) >= std::abs(ey);
    const double e_major = x_major ? ex : ey;
    const double e_minor = x_major ? ey : ex;
    const double minor_per_major = e_major != 0.0 ? e_minor / e_major : 0.0;
    const int32_t m_lo =
        std::min<int32_t>(0, static_cast<int32_t>(std::floor(e_major))) - 1;
    const int32_t m_hi =
        std::max<int32_t>(0, static_cast<int32_t>(std::ceil(e_major))) + 1;
    const bool forward = e_major >= 0.0;

    for (int32_t m = m_lo; m <= m_hi; ++m) {
        double center_f = m * minor_per_major;
        if (forward ? m < 0 : m > 0) {
            center_f = 0.0; // clamped to the origin end
        } else if (forward ? m > e_major : m < e_major) {
            center_f = e_minor; // clamped to the far end
        }
        const int32_t center = static_cast<int32_t>(fast_round(center_f));
        for (int32_t d = -1; d <= 1; ++d) {
            const int32_t minor = center + d;
            const int32_t xp = x_major ? m : minor;
            const int32_t yp = x_major ? minor : m;
            if (xp == 0 && yp == 0) continue;
            const double t_min = (vx * xp + vy * yp) * inv_v2;
            const double ddx = vx * t_min - xp;
            const double ddy = vy * t_min - yp;
            const double d2 = ddx * ddx + ddy * ddy;
            const double t_us = t0 + t_min * 1e6;
            if (d2 < slack_sq && t_us > send_end && t_us <= stop_time) {
                const int32_t x = static_cast<int32_t>(fe.event.x) + xp;
                const int32_t y = static_cast<int32_t>(fe.event.y) + yp;
                if (x >= 0 && x < sensor_width && y >= 0 && y < sensor_height) {
                    emit(Event{static_cast<uint16_t>(x), static_cast<uint16_t>(y),
                               static_cast<uint32_t>(fast_round(t_us)),
                               fe.event.p});
                }
            }
        }
    }
}

} // namespace

std::vector<Event> predict_events(const FlowEvent& fe, const PredictionWindow& win,
                                  double pixel_slack, uint16_t sensor_width,
                                  uint16_t sensor_height) {
    std::vector<Event> preds;
    predict_events_into(fe, win, pixel_slack, sensor_width, sensor_height,
                        [&](const Event& e) { preds.push_back(e); });
    return preds;
}

namespace {

// One output buffer per contiguous input chunk: the concatenation in chunk
// order reproduces the sequential per-event emission order for any thread
// count or completion order. The buffer element type is either Event or a
// packed sort key, depending on what the caller does next.
template <typename T, typename Store>
std::vector<T> predict_batch_buffers(const std::vector<FlowEvent>& flow_events,
                                     const PredictionWindow& win,
                                     double pixel_slack, uint16_t width,
                                     uint16_t height, unsigned parallelism,
                                     Store store) {
    const size_t n = flow_events.size();
    const unsigned n_chunks =
        n < 2 ? 1 : std::max(1u, std::min<unsigned>(parallelism,
                                                    static_cast<unsigned>(n)));
    const size_t chunk = (n + n_chunks - 1) / n_chunks;
    std::vector<std::vector<T>> buffers(n_chunks);

    auto work = [&](unsigned ci) {
        const size_t begin = ci * chunk;
        const size_t end = std::min(n, begin + chunk);
        std::vector<T>& out = buffers[ci];
        out.reserve((end - begin) * 40);
        for (size_t i = begin; i < end; ++i) {
            predict_events_into(flow_events[i], win, pixel_slack, width, height,
                                [&](const Event& e) { out.push_back(store(e)); });
        }
    };

    if (n_chunks == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_chunks);
        for (unsigned ci = 0; ci < n_chunks; ++ci) {
            if (ci * chunk >= n) break;
            threads.emplace_back(work, ci);
        }
        for (std::thread& t : threads) t.join();
    }

    if (n_chunks == 1) {
        return std::move(buffers[0]);
    }
    size_t total = 0;
    for (const auto& b : buffers) total += b.size();
    std::vector<T> merged;
    merged.reserve(total);
    for (const auto& b : buffers) {
        merged.insert(merged.end(), b.begin(), b.end());
    }
    return merged;
}

std::vector<Event> predict_batch_unsorted(const std::vector<FlowEvent>& flow_events,
                                          const PredictionWindow& win,
                                          double pixel_slack, uint16_t width,
                                          uint16_t height, unsigned parallelism) {
    return predict_batch_buffers<Event>(flow_events, win, pixel_slack, width,
                                        height, parallelism,
                                        [](const Event& e) { return e; });
}

} // namespace

std::vector<Event> rx_predict_batch_unsorted(
    const std::vector<FlowEvent>& flow_events, const PredictionWindow& win,
    double pixel_slack, uint16_t sensor_width, uint16_t sensor_height,
    unsigned parallelism) {
    return predict_batch_unsorted(flow_events, win, pixel_slack, sensor_width,
                                  sensor_height, parallelism);
}

std::vector<Event> rx_predict_batch(const std::vector<FlowEvent>& flow_events,
                                    const PredictionWindow& win, double pixel_slack,
                                    uint16_t sensor_width, uint16_t sensor_height,
                                    unsigned parallelism) {
    // Emit packed sort keys directly so the batch is generated, sorted, and
    // unpacked in single passes.
    std::vector<uint64_t> keys = predict_batch_buffers<uint64_t>(
        flow_events, win, pixel_slack, sensor_width, sensor_height, parallelism,
        [](const Event& e) { return detail::event_key(e); });
    if (keys.size() < 4096) {
        std::vector<Event> out;
        out.reserve(keys.size());
        for (uint64_t k : keys) out.push_back(detail::event_from_key(k));
        sort_events(out);
        return out;
    }
    detail::radix_sort_keys(keys);
    std::vector<Event> out(keys.size());
    for (size_t i = 0; i < keys.size(); ++i) {
        out[i] = detail::event_from_key(keys[i]);
    }
    return out;
}

namespace {

void flush_cycle(std::vector<Event>& cycle, const ReceiverOptions& options,
                 std::vector<Event>& out) {
    if (cycle.empty()) return;
    if (options.sort_mode == SortMode::PerWindow) {
        sort_events(cycle);
    } else {
        // Bucket by fixed time interval, sort each bucket. Buckets cover
        // disjoint ascending time ranges, so the concatenation equals the
        // result of one full sort.
        const uint32_t step = std::max<uint32_t>(1, options.microbatch_us);
        uint32_t lo = cycle.front().t, hi = lo;
        for (const Event& e : cycle) {
            lo = std::min(lo, e.t);
            hi = std::max(hi, e.t);
        }
        const size_t n_buckets = static_cast<size_t>((hi - lo) / step) + 1;
        std::vector<std::vector<Event>> buckets(n_buckets);
        for (const Event& e : cycle) {
            buckets[(e.t - lo) / step].push_back(e);
        }
        cycle.clear();
        for (auto& b : buckets) {
            sort_events(b);
            cycle.insert(cycle.end(), b.begin(), b.end());
        }
    }
    out.insert(out.end(), cycle.begin(), cycle.end());
    cycle.clear();
}

} // namespace

EventStream reconstruct(const std::vector<Packet>& packets, const CodecConfig& cfg,
                        const ReceiverOptions& options) {
    EventStream out;
    out.width = cfg.sensor_width;
    out.height = cfg.sensor_height;

    enum class Phase { BeforeStart, Sending, Predicting };
    Phase phase = Phase::BeforeStart;

    std::vector<FlowEvent> flow_buffer;
    std::vector<Event> cycle; // transmitted + predicted events of one cycle

    auto protocol_error = [](size_t index, const char* what) {
        throw Error("packet " + std::to_string(index) + ": " + what);
    };

    for (size_t i = 0; i < packets.size(); ++i) {
        const Packet& pkt = packets[i];
        if (std::holds_alternative<SendStart>(pkt)) {
            if (phase == Phase::Sending) {
                protocol_error(i, "SendStart inside a sending state");
            }
            flush_cycle(cycle, options, out.events);
            flow_buffer.clear();
            phase = Phase::Sending;
        } else if (const SendEnd* se = std::get_if<SendEnd>(&pkt)) {
            if (phase != Phase::Sending) {
                protocol_error(i, "SendEnd without an open sending state");
            }
            const PredictionWindow win{se->t, se->predict_time_us};
            std::vector<Event> preds = predict_batch_unsorted(
                flow_buffer, win, cfg.pixel_slack, cfg.sensor_width,
                cfg.sensor_height, options.parallelism);
            cycle.insert(cycle.end(), preds.begin(), preds.end());
            flow_buffer.clear();
            phase = Phase::Predicting;
        } else if (const FlowEvent* fe = std::get_if<FlowEvent>(&pkt)) {
            if (phase != Phase::Sending) {
                protocol_error(i, "flow event outside a sending state");
            }
            cycle.push_back(fe->event);
            flow_buffer.push_back(*fe);
        } else {
            const Event& e = std::get<Event>(pkt);
            if (phase == Phase::BeforeStart) {
                protocol_error(i, "event before the first SendStart");
            }
            cycle.push_back(e);
        }
    }
    flush_cycle(cycle, options, out.events);
    return out;
}

} // namespace fbc
