#pragma once

#include "fbc/events.hpp"

#include <cstdint>
#include <vector>

namespace fbc {

struct MetricParams {
    double sigma_x = 5.0;    // px
    double sigma_y = 5.0;    // px
    double sigma_t = 5000.0; // us
    uint16_t cube_w = 0;     // 0 = sensor width
    uint16_t cube_h = 0;     // 0 = sensor height
    uint32_t cube_len_us = 5000;
    int te_window = 1; // 3x3
};

// Eq. of event reduction: fraction of input events never transmitted.
double event_reduction(uint64_t n_s, uint64_t n_tx);

// Byte-model compression ratio: 8 bytes per original event over 11 bytes
// per flow event plus 8 per no-flow event.
double compression_ratio(uint64_t n_s, uint64_t n_tx, uint64_t n_nf);

struct CubeDistance {
    uint32_t cx = 0; // spatial cube column
    uint32_t cy = 0; // spatial cube row
    uint32_t kt = 0; // temporal bin
    uint64_t t_start_us = 0;
    double raw = 0.0;      // RKHS distance before normalization
    double distance = 0.0; // raw / max(1, orig_count)
    uint64_t orig_count = 0;
    uint64_t recon_count = 0;
};

// Kernel distance between the two streams per event cube. Polarities are
// orthogonal channels; cubes empty in both streams are skipped. Cubes are
// ordered by (kt, cy, cx).
std::vector<CubeDistance> astsm_distance(const EventStream& orig,
                                         const EventStream& recon,
                                         const MetricParams& params,
                                         unsigned parallelism = 1);

double mean_cube_distance(const std::vector<CubeDistance>& cubes);

struct TemporalErrorResult {
    double mean_us = 0.0;
    double median_us = 0.0;
    uint64_t matched = 0;
    uint64_t unmatched = 0; // recon events with an empty spatial window
};

// Matches each reconstructed event to the temporally closest original event
// within the (2*te_window+1)^2 pixel window of its pixel.
TemporalErrorResult temporal_error(const EventStream& orig, const EventStream& recon,
                                   int te_window = 1);

// Uniformly removes round(target_er * N) events without replacement;
// deterministic for a fixed seed, ordering preserved.
EventStream random_reduce(const EventStream& stream, double target_er, uint64_t seed);

struct MetricsReport {
    double er = 0.0;
    double cr = 0.0;      // Eq.-model CR (control markers excluded)
    double wire_cr = 0.0; // CR counting every wire byte incl. markers
    std::vector<CubeDistance> per_cube;
    double mean_distance = 0.0;
    double mean_te_us = 0.0;
    double median_te_us = 0.0;
    uint64_t te_unmatched = 0;
    uint64_t container_overhead_bytes = 0; // marker bytes on the wire
};

} // namespace fbc
