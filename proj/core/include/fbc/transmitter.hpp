#pragma once

#include "fbc/events.hpp"
#include "fbc/flow.hpp"
#include "fbc/wire.hpp"

#include <cstdint>
#include <vector>

namespace fbc {

// Eq.-of-motion for the adaptive send time: the time, in us, for an event
// moving at the mean sampled speed to travel one pixel. Throws on an empty
// sample list.
uint32_t compute_send_time(const std::vector<double>& magnitudes_px_s);

struct TxStats {
    uint64_t n_s = 0;          // events seen
    uint64_t n_tx = 0;         // events transmitted (plain + flow)
    uint64_t n_nf = 0;         // transmitted without flow
    uint64_t n_suppressed = 0; // predicted at the receiver instead
    uint64_t n_cycles = 0;     // sending states begun
    uint64_t n_clamped = 0;    // velocity components clamped by quantization
};

enum class TxPhase { Sending, Predicting };

// Edge-side state machine. Feed events in non-decreasing time order along
// with their flow estimates; packets come out. The transmitter performs no
// prediction and keeps no event history.
class Transmitter {
public:
    explicit Transmitter(const CodecConfig& cfg);

    // Appends zero or more packets to out. Throws fbc::Error if e.t runs
    // backwards.
    void process(const Event& e, const FlowEstimate& flow, std::vector<Packet>& out);

    const TxStats& stats() const { return stats_; }
    uint32_t current_send_time_us() const { return current_st_us_; }
    TxPhase phase() const { return phase_; }

private:
    void advance_phase(std::vector<Packet>& out);

    CodecConfig cfg_;
    TxPhase phase_ = TxPhase::Sending;
    bool started_ = false;
    uint64_t phase_start_t_ = 0;
    uint64_t phase_end_t_ = 0;
    uint32_t current_st_us_;
    uint32_t last_t_ = 0;
    double calib_sum_ = 0.0;
    uint32_t calib_count_ = 0;
    bool calibrated_this_phase_ = false;
    TxStats stats_;
};

// Convenience wrapper: runs a whole stream through the transmitter with the
// given flow provider.
struct TxResult {
    std::vector<Packet> packets;
    TxStats stats;
};
TxResult transmit(const EventStream& stream, FlowProvider& flow, const CodecConfig& cfg);

} // namespace fbc
