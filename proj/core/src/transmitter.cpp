#include "fbc/transmitter.hpp"

#include "fbc/error.hpp"

#include <cmath>
#include <numeric>

namespace fbc {

namespace {

uint32_t send_time_from_mean(double mean_px_s) {
    const long long st = std::llround(1e6 / mean_px_s);
    return st < 1 ? 1u : static_cast<uint32_t>(st);
}

} // namespace

uint32_t compute_send_time(const std::vector<double>& magnitudes_px_s) {
    if (magnitudes_px_s.empty()) {
        throw Error("send-time calibration needs at least one flow magnitude");
    }
    const double mean =
        std::accumulate(magnitudes_px_s.begin(), magnitudes_px_s.end(), 0.0) /
        static_cast<double>(magnitudes_px_s.size());
    return send_time_from_mean(mean);
}

Transmitter::Transmitter(const CodecConfig& cfg)
    : cfg_(cfg), current_st_us_(cfg.initial_send_time_us) {
    if (cfg.predict_time_us == 0) {
        throw Error("predict time must be positive");
    }
    if (cfg.initial_send_time_us == 0) {
        throw Error("initial send time must be positive");
    }
}

void Transmitter::advance_phase(std::vector<Packet>& out) {
    const uint32_t boundary_t = static_cast<uint32_t>(phase_end_t_);
    if (phase_ == TxPhase::Sending) {
        // Close the sending state. A phase that never reached the full
        // calibration count still recalibrates when it saw a reasonable
        // number of samples; otherwise the previous ST is kept.
        if (!calibrated_this_phase_ && calib_count_ >= 50) {
            current_st_us_ = send_time_from_mean(calib_sum_ / calib_count_);
        }
        out.emplace_back(SendEnd{boundary_t, cfg_.predict_time_us});
        phase_ = TxPhase::Predicting;
        phase_start_t_ = phase_end_t_;
        phase_end_t_ += cfg_.predict_time_us;
    } else {
        out.emplace_back(SendStart{boundary_t});
        phase_ = TxPhase::Sending;
        phase_start_t_ = phase_end_t_;
        phase_end_t_ += current_st_us_;
        calib_sum_ = 0.0;
        calib_count_ = 0;
        calibrated_this_phase_ = false;
        ++stats_.n_cycles;
    }
}

void Transmitter::process(const Event& e, const FlowEstimate& flow,
                          std::vector<Packet>& out) {
    if (!started_) {
        started_ = true;
        last_t_ = e.t;
        phase_ = TxPhase::Sending;
        phase_start_t_ = e.t;
        phase_end_t_ = static_cast<uint64_t>(e.t) + current_st_us_;
        out.emplace_back(SendStart{e.t});
        ++stats_.n_cycles;
    }
    if (e.t < last_t_) {
        throw Error("input events run backwards in time");
    }
    last_t_ = e.t;

    while (static_cast<uint64_t>(e.t) >= phase_end_t_) {
        advance_phase(out);
    }

    ++stats_.n_s;
    if (phase_ == TxPhase::Sending) {
        if (flow.valid) {
            FlowEvent fe;
            fe.event = e;
            const int16_t qvx = quantize_velocity(flow.vx);
            const int16_t qvy = quantize_velocity(flow.vy);
            if (qvx != std::llround(flow.vx)) ++stats_.n_clamped;
            if (qvy != std::llround(flow.vy)) ++stats_.n_clamped;
            fe.vx = qvx;
            fe.vy = qvy;
            if (qvx == 0 && qvy == 0) {
                // Below quantization resolution; send plain instead of a
                // zero-velocity flow event the receiver could not use.
                out.emplace_back(e);
                ++stats_.n_tx;
                ++stats_.n_nf;
            } else {
                out.emplace_back(fe);
                ++stats_.n_tx;
                if (!calibrated_this_phase_ && calib_count_ < cfg_.calibration_count) {
                    calib_sum_ += flow_magnitude(flow.vx, flow.vy);
                    ++calib_count_;
                    if (calib_count_ == cfg_.calibration_count) {
                        current_st_us_ = send_time_from_mean(calib_sum_ / calib_count_);
                        phase_end_t_ = phase_start_t_ + current_st_us_;
                        calibrated_this_phase_ = true;
                    }
                }
            }
        } else {
            out.emplace_back(e);
            ++stats_.n_tx;
            ++stats_.n_nf;
        }
    } else {
        if (flow.valid) {
            ++stats_.n_suppressed;
        } else {
            out.emplace_back(e);
            ++stats_.n_tx;
            ++stats_.n_nf;
        }
    }
}

TxResult transmit(const EventStream& stream, FlowProvider& flow,
                  const CodecConfig& cfg) {
    Transmitter tx(cfg);
    TxResult result;
    result.packets.reserve(stream.events.size() / 2 + 16);
    for (size_t i = 0; i < stream.events.size(); ++i) {
        const Event& e = stream.events[i];
        tx.process(e, flow.estimate(e, i), result.packets);
    }
    result.stats = tx.stats();
    return result;
}

} // namespace fbc
