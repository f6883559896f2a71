// fbc: flow-based event-stream codec command line.
//
// Subcommands: synth, compress, decompress, simulate, metrics, bench.
// Data outputs are deterministic for a fixed --seed at any --parallelism.

#include "fbc/cascade.hpp"
#include "fbc/error.hpp"
#include "fbc/events.hpp"
#include "fbc/io.hpp"
#include "fbc/metrics.hpp"
#include "fbc/receiver.hpp"
#include "fbc/synth.hpp"
#include "fbc/transmitter.hpp"
#include "fbc/wire.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace fbc;

struct CodecFlags {
    uint32_t pt_ms = 30;
    double slack = 0.4;
    uint32_t calib_count = 500;
    uint32_t initial_st_ms = 10;
    double v_min = 1.0;
    double v_max = 2047.0;
    std::string flow = "planefit";
    PlaneFitParams plane;
    unsigned parallelism = std::thread::hardware_concurrency();
    std::string sort_mode = "window";
    uint32_t microbatch_us = 1000;
};

struct MetricFlags {
    double sigma_x = 5.0;
    double sigma_y = 5.0;
    double sigma_t = 5000.0;
    double cube_ms = 5.0;
    int te_window = 1;
};

struct InputFlags {
    std::string in;
    std::string gt;
    std::string preset;
    std::string scene_file;
    uint32_t duration_ms = 2000;
    uint64_t seed = 0;
    double noise_rate = 0.0;
    std::optional<uint16_t> width;
    std::optional<uint16_t> height;
    std::string columns = "xytp";
    std::string time_unit = "auto";
};

void add_codec_flags(CLI::App* cmd, CodecFlags& f) {
    cmd->add_option("--pt-ms", f.pt_ms, "predict time PT in ms")
        ->check(CLI::Range(1u, 16383u));
    cmd->add_option("--slack", f.slack, "pixel slack (default 0.4)");
    cmd->add_option("--calib-count", f.calib_count,
                    "flow samples per send-time calibration");
    cmd->add_option("--initial-st-ms", f.initial_st_ms,
                    "send time before the first calibration");
    cmd->add_option("--v-min", f.v_min, "minimum usable flow magnitude, px/s");
    cmd->add_option("--v-max", f.v_max, "maximum usable flow magnitude, px/s");
    cmd->add_option("--flow", f.flow, "flow provider")
        ->check(CLI::IsMember({"planefit", "oracle"}));
    cmd->add_option("--plane-window", f.plane.window_radius,
                    "plane-fit window radius, px");
    cmd->add_option("--plane-dt-max-us", f.plane.dt_max_us,
                    "plane-fit temporal support window");
    cmd->add_option("--plane-min-support", f.plane.min_support,
                    "plane-fit minimum support pixels");
    cmd->add_option("--plane-residual-max", f.plane.residual_max_px,
                    "plane-fit residual gate, px");
    cmd->add_option("--parallelism", f.parallelism,
                    "receiver worker threads (0 = hardware)");
    cmd->add_option("--sort-mode", f.sort_mode, "receiver sort strategy")
        ->check(CLI::IsMember({"window", "microbatch"}));
    cmd->add_option("--microbatch-us", f.microbatch_us,
                    "micro-batch sort interval");
}

void add_metric_flags(CLI::App* cmd, MetricFlags& f) {
    cmd->add_option("--sigma-x", f.sigma_x, "kernel sigma_x, px");
    cmd->add_option("--sigma-y", f.sigma_y, "kernel sigma_y, px");
    cmd->add_option("--sigma-t", f.sigma_t, "kernel sigma_t, us");
    cmd->add_option("--cube-ms", f.cube_ms, "event-cube temporal length, ms");
    cmd->add_option("--te-window", f.te_window,
                    "temporal-error spatial window radius, px");
}

void add_input_flags(CLI::App* cmd, InputFlags& f, bool with_synth_inputs) {
    cmd->add_option("--in", f.in, "input event file (.aer8/.csv/.txt)");
    cmd->add_option("--gt", f.gt, "ground-truth flow sidecar for --flow oracle");
    if (with_synth_inputs) {
        cmd->add_option("--preset", f.preset, "built-in scene preset")
            ->check(CLI::IsMember({"bar-square", "const-velocity", "bounce"}));
        cmd->add_option("--scene", f.scene_file, "scene spec file");
        cmd->add_option("--duration-ms", f.duration_ms, "scene duration, ms");
        cmd->add_option("--noise-rate", f.noise_rate, "noise events per second");
    }
    cmd->add_option("--seed", f.seed, "seed for every randomized step");
    cmd->add_option("--width", f.width, "sensor width for geometry-less inputs");
    cmd->add_option("--height", f.height, "sensor height for geometry-less inputs");
    cmd->add_option("--columns", f.columns, "text ingest column order")
        ->check(CLI::IsMember({"xytp", "txyp"}));
    cmd->add_option("--time-unit", f.time_unit, "text ingest time unit")
        ->check(CLI::IsMember({"auto", "s", "us"}));
}

CodecConfig make_codec_config(const CodecFlags& f, uint16_t width, uint16_t height) {
    CodecConfig cfg;
    cfg.predict_time_us = f.pt_ms * 1000;
    cfg.pixel_slack = f.slack;
    cfg.calibration_count = f.calib_count;
    cfg.initial_send_time_us = f.initial_st_ms * 1000;
    cfg.sensor_width = width;
    cfg.sensor_height = height;
    cfg.v_min = f.v_min;
    cfg.v_max = f.v_max;
    return cfg;
}

ReceiverOptions make_rx_options(const CodecFlags& f) {
    ReceiverOptions o;
    o.parallelism = f.parallelism == 0
                        ? std::max(1u, std::thread::hardware_concurrency())
                        : f.parallelism;
    o.sort_mode = f.sort_mode == "microbatch" ? SortMode::MicroBatch
                                              : SortMode::PerWindow;
    o.microbatch_us = f.microbatch_us;
    return o;
}

MetricParams make_metric_params(const MetricFlags& f) {
    MetricParams p;
    p.sigma_x = f.sigma_x;
    p.sigma_y = f.sigma_y;
    p.sigma_t = f.sigma_t;
    p.cube_len_us = static_cast<uint32_t>(f.cube_ms * 1000.0);
    p.te_window = f.te_window;
    return p;
}

ReadOptions make_read_options(const InputFlags& f) {
    ReadOptions o;
    o.width = f.width;
    o.height = f.height;
    o.columns = f.columns;
    o.time_unit = f.time_unit == "s" ? TimeUnit::Seconds
                 : f.time_unit == "us" ? TimeUnit::Micros
                                       : TimeUnit::Auto;
    return o;
}

GroundTruthFlow read_ground_truth(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open ground-truth file '" + path + "'");
    }
    GroundTruthFlow truth;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'i') continue; // header "index,..."
        GroundTruth gt;
        size_t index;
        int noise;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%d", &index, &gt.vx, &gt.vy,
                        &noise) != 4) {
            throw Error(path + ": parse error at line " + std::to_string(line_no));
        }
        gt.noise = noise != 0;
        if (index != truth.size()) {
            throw Error(path + ": indices must be dense and ordered (line " +
                        std::to_string(line_no) + ")");
        }
        truth.push_back(gt);
    }
    return truth;
}

void write_ground_truth(const GroundTruthFlow& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot create '" + path + "'");
    }
    out << "index,vx,vy,noise\n";
    char buf[96];
    for (size_t i = 0; i < truth.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d\n", i, truth[i].vx,
                      truth[i].vy, truth[i].noise ? 1 : 0);
        out << buf;
    }
}

// Source events plus optional ground truth, from file or generator.
struct LoadedInput {
    EventStream stream;
    GroundTruthFlow truth;
    bool has_truth = false;
};

LoadedInput load_input(const InputFlags& f, bool need_truth_for_oracle) {
    LoadedInput li;
    const int sources = (!f.in.empty() ? 1 : 0) + (!f.preset.empty() ? 1 : 0) +
                        (!f.scene_file.empty() ? 1 : 0);
    if (sources != 1) {
        throw Error("exactly one of --in, --preset, --scene is required");
    }
    if (!f.in.empty()) {
        li.stream = read_events(f.in, format_from_path(f.in), make_read_options(f));
        if (!f.gt.empty()) {
            li.truth = read_ground_truth(f.gt);
            if (li.truth.size() != li.stream.events.size()) {
                throw Error("ground truth covers " + std::to_string(li.truth.size()) +
                            " events but the stream has " +
                            std::to_string(li.stream.events.size()));
            }
            li.has_truth = true;
        }
    } else {
        SceneSpec scene = f.preset.empty()
                              ? load_scene_spec(f.scene_file)
                              : preset_scene(f.preset, f.duration_ms * 1000, f.seed);
        if (!f.preset.empty()) {
            scene.noise_rate_hz = f.noise_rate;
        }
        scene.seed = f.seed;
        SynthResult r = generate(scene);
        li.stream = std::move(r.stream);
        li.truth = std::move(r.truth);
        li.has_truth = true;
    }
    if (need_truth_for_oracle && !li.has_truth) {
        throw Error("--flow oracle needs a synthetic scene or a --gt sidecar");
    }
    return li;
}

std::unique_ptr<FlowProvider> make_flow_provider(const CodecFlags& f,
                                                 const LoadedInput& input,
                                                 const CodecConfig& cfg) {
    if (f.flow == "oracle") {
        return std::make_unique<OracleFlowProvider>(input.truth, cfg.v_min,
                                                    cfg.v_max);
    }
    PlaneFitParams params = f.plane;
    params.v_min = cfg.v_min;
    params.v_max = cfg.v_max;
    return std::make_unique<PlaneFitFlowProvider>(input.stream.width,
                                                  input.stream.height, params);
}

uint64_t marker_bytes(const std::vector<Packet>& packets) {
    uint64_t n = 0;
    for (const Packet& p : packets) {
        if (std::holds_alternative<SendStart>(p) ||
            std::holds_alternative<SendEnd>(p)) {
            n += kMarkerBytes;
        }
    }
    return n;
}

struct RunOutcome {
    TxResult tx;
    EventStream recon;
    MetricsReport report;
};

RunOutcome run_pipeline(const LoadedInput& input, const CodecFlags& cf,
                        const MetricFlags& mf, uint32_t pt_ms, bool with_distance) {
    CodecFlags flags = cf;
    flags.pt_ms = pt_ms;
    const CodecConfig cfg =
        make_codec_config(flags, input.stream.width, input.stream.height);
    auto provider = make_flow_provider(flags, input, cfg);

    RunOutcome out;
    out.tx = transmit(input.stream, *provider, cfg);
    out.recon = reconstruct(out.tx.packets, cfg, make_rx_options(flags));

    const PayloadStats payload = payload_byte_count(out.tx.packets);
    out.report.er = event_reduction(out.tx.stats.n_s, out.tx.stats.n_tx);
    out.report.cr = compression_ratio(out.tx.stats.n_s, out.tx.stats.n_tx,
                                      out.tx.stats.n_nf);
    out.report.container_overhead_bytes = marker_bytes(out.tx.packets);
    out.report.wire_cr =
        static_cast<double>(out.tx.stats.n_s) * 8.0 /
        static_cast<double>(payload.bytes + out.report.container_overhead_bytes);

    if (with_distance) {
        const MetricParams params = make_metric_params(mf);
        const ReceiverOptions ro = make_rx_options(flags);
        out.report.per_cube =
            astsm_distance(input.stream, out.recon, params, ro.parallelism);
        out.report.mean_distance = mean_cube_distance(out.report.per_cube);
        const TemporalErrorResult te =
            temporal_error(input.stream, out.recon, params.te_window);
        out.report.mean_te_us = te.mean_us;
        out.report.median_te_us = te.median_us;
        out.report.te_unmatched = te.unmatched;
    }
    return out;
}

void print_report(std::FILE* f, const TxStats& stats, const MetricsReport& r,
                  bool with_distance) {
    std::fprintf(f, "events_in                %" PRIu64 "\n", stats.n_s);
    std::fprintf(f, "events_transmitted       %" PRIu64 "\n", stats.n_tx);
    std::fprintf(f, "events_no_flow           %" PRIu64 "\n", stats.n_nf);
    std::fprintf(f, "events_suppressed        %" PRIu64 "\n", stats.n_suppressed);
    std::fprintf(f, "cycles                   %" PRIu64 "\n", stats.n_cycles);
    std::fprintf(f, "er                       %.6f\n", r.er);
    std::fprintf(f, "cr                       %.6f\n", r.cr);
    std::fprintf(f, "wire_cr                  %.6f\n", r.wire_cr);
    std::fprintf(f, "container_overhead_bytes %" PRIu64 "\n",
                 r.container_overhead_bytes);
    if (with_distance) {
        std::fprintf(f, "cubes                    %zu\n", r.per_cube.size());
        std::fprintf(f, "mean_distance            %.6f\n", r.mean_distance);
        std::fprintf(f, "mean_te_us               %.3f\n", r.mean_te_us);
        std::fprintf(f, "median_te_us             %.3f\n", r.median_te_us);
        std::fprintf(f, "te_unmatched             %" PRIu64 "\n", r.te_unmatched);
    }
}

struct SweepRange {
    uint32_t lo = 0, hi = 0, step = 1;
};

SweepRange parse_sweep(const std::string& text) {
    SweepRange r;
    if (std::sscanf(text.c_str(), "%u:%u:%u", &r.lo, &r.hi, &r.step) != 3 ||
        r.step == 0 || r.lo == 0 || r.hi < r.lo) {
        throw Error("sweep must be lo:hi:step with positive values");
    }
    return r;
}

int cmd_synth(const InputFlags& in_flags, const std::string& out_path,
              const std::string& gt_out) {
    SceneSpec scene;
    if (!in_flags.scene_file.empty()) {
        scene = load_scene_spec(in_flags.scene_file);
        scene.seed = in_flags.seed;
    } else if (!in_flags.preset.empty()) {
        scene = preset_scene(in_flags.preset, in_flags.duration_ms * 1000,
                             in_flags.seed);
        scene.noise_rate_hz = in_flags.noise_rate;
    } else {
        throw Error("synth needs --preset or --scene");
    }
    const SynthResult r = generate(scene);
    write_events(r.stream, out_path, format_from_path(out_path));
    if (!gt_out.empty()) {
        write_ground_truth(r.truth, gt_out);
    }
    std::fprintf(stderr, "events    %zu\n", r.stream.events.size());
    std::fprintf(stderr, "sensor    %ux%u\n", scene.width, scene.height);
    std::fprintf(stderr, "duration  %u us\n", scene.duration_us);
    return 0;
}

int cmd_compress(const InputFlags& in_flags, const CodecFlags& cf,
                 const std::string& out_path, const std::string& cascade) {
    const LoadedInput input = load_input(in_flags, cf.flow == "oracle");
    const CodecConfig cfg =
        make_codec_config(cf, input.stream.width, input.stream.height);
    auto provider = make_flow_provider(cf, input, cfg);
    const TxResult tx = transmit(input.stream, *provider, cfg);

    std::vector<uint8_t> capture(16, 0);
    capture[0] = 'F';
    capture[1] = 'B';
    capture[2] = 'C';
    capture[3] = '1';
    capture[4] = static_cast<uint8_t>(input.stream.width);
    capture[5] = static_cast<uint8_t>(input.stream.width >> 8);
    capture[6] = static_cast<uint8_t>(input.stream.height);
    capture[7] = static_cast<uint8_t>(input.stream.height >> 8);
    for (const Packet& p : tx.packets) {
        encode_packet(p, capture);
    }

    MetricsReport report;
    const PayloadStats payload = payload_byte_count(tx.packets);
    report.er = event_reduction(tx.stats.n_s, tx.stats.n_tx);
    report.cr = compression_ratio(tx.stats.n_s, tx.stats.n_tx, tx.stats.n_nf);
    report.container_overhead_bytes = marker_bytes(tx.packets);
    report.wire_cr = static_cast<double>(tx.stats.n_s) * 8.0 /
                     static_cast<double>(payload.bytes +
                                         report.container_overhead_bytes);

    if (cascade == "lzma") {
        const auto archive = cascade_compress(capture);
        write_file(out_path, archive);
        std::fprintf(stderr, "cascaded_cr              %.6f\n",
                     cascaded_cr(tx.stats.n_s, archive.size()));
    } else {
        write_file(out_path, capture);
    }
    print_report(stderr, tx.stats, report, false);
    return 0;
}

int cmd_decompress(const std::string& in_path, const std::string& out_path,
                   const CodecFlags& cf) {
    std::vector<uint8_t> bytes = read_file(in_path);
    if (is_cascade_archive(bytes.data(), bytes.size())) {
        bytes = cascade_decompress(bytes);
    }
    if (bytes.size() < 16 || bytes[0] != 'F' || bytes[1] != 'B' ||
        bytes[2] != 'C' || bytes[3] != '1') {
        throw Error(in_path + ": not a packet capture (bad magic)");
    }
    const uint16_t width = static_cast<uint16_t>(bytes[4] | (bytes[5] << 8));
    const uint16_t height = static_cast<uint16_t>(bytes[6] | (bytes[7] << 8));
    const DecodeResult decoded = decode_packets(bytes.data() + 16, bytes.size() - 16);
    if (decoded.error) {
        throw Error(in_path + ": " + decoded.error->reason + " at offset " +
                    std::to_string(16 + decoded.error->offset));
    }

    CodecConfig cfg = make_codec_config(cf, width, height);
    const EventStream recon =
        reconstruct(decoded.packets, cfg, make_rx_options(cf));
    write_events(recon, out_path, format_from_path(out_path));
    std::fprintf(stderr, "packets   %zu\n", decoded.packets.size());
    std::fprintf(stderr, "events    %zu\n", recon.events.size());
    return 0;
}

int cmd_metrics(const std::string& orig_path, const std::string& recon_path,
                const InputFlags& in_flags, const MetricFlags& mf,
                const std::string& csv_path) {
    const ReadOptions ro = make_read_options(in_flags);
    const EventStream orig =
        read_events(orig_path, format_from_path(orig_path), ro);
    const EventStream recon =
        read_events(recon_path, format_from_path(recon_path), ro);
    const MetricParams params = make_metric_params(mf);
    const auto cubes = astsm_distance(orig, recon, params);
    const TemporalErrorResult te = temporal_error(orig, recon, params.te_window);

    std::printf("events_orig     %zu\n", orig.events.size());
    std::printf("events_recon    %zu\n", recon.events.size());
    std::printf("cubes           %zu\n", cubes.size());
    std::printf("mean_distance   %.6f\n", mean_cube_distance(cubes));
    std::printf("mean_te_us      %.3f\n", te.mean_us);
    std::printf("median_te_us    %.3f\n", te.median_us);
    std::printf("te_unmatched    %" PRIu64 "\n", te.unmatched);

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw Error("cannot create '" + csv_path + "'");
        csv << "cube_index,t_start_us,distance\n";
        char buf[80];
        for (size_t i = 0; i < cubes.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%" PRIu64 ",%.9g\n", i,
                          cubes[i].t_start_us, cubes[i].distance);
            csv << buf;
        }
    }
    return 0;
}

int cmd_simulate(const InputFlags& in_flags, const CodecFlags& cf,
                 const MetricFlags& mf, const std::string& baseline,
                 const std::string& sweep, const std::string& csv_path,
                 const std::string& recon_out) {
    const bool baseline_random = baseline == "random";
    const LoadedInput input = load_input(in_flags, cf.flow == "oracle");

    if (!sweep.empty()) {
        const SweepRange range = parse_sweep(sweep);
        std::ofstream csv;
        if (!csv_path.empty()) {
            csv.open(csv_path);
            if (!csv) throw Error("cannot create '" + csv_path + "'");
            csv << "pt_ms,er,cr,wire_cr,mean_distance,mean_te_us,median_te_us";
            if (baseline_random) csv << ",baseline_distance";
            csv << "\n";
        }
        std::printf("pt_ms er cr wire_cr mean_distance mean_te_us median_te_us%s\n",
                    baseline_random ? " baseline_distance" : "");
        for (uint32_t pt = range.lo; pt <= range.hi; pt += range.step) {
            const RunOutcome run = run_pipeline(input, cf, mf, pt, true);
            double baseline = 0.0;
            if (baseline_random) {
                const EventStream reduced =
                    random_reduce(input.stream, run.report.er, in_flags.seed);
                baseline = mean_cube_distance(astsm_distance(
                    input.stream, reduced, make_metric_params(mf),
                    make_rx_options(cf).parallelism));
            }
            char line[256];
            if (baseline_random) {
                std::snprintf(line, sizeof line,
                              "%u,%.6f,%.6f,%.6f,%.6f,%.3f,%.3f,%.6f", pt,
                              run.report.er, run.report.cr, run.report.wire_cr,
                              run.report.mean_distance, run.report.mean_te_us,
                              run.report.median_te_us, baseline);
            } else {
                std::snprintf(line, sizeof line, "%u,%.6f,%.6f,%.6f,%.6f,%.3f,%.3f",
                              pt, run.report.er, run.report.cr, run.report.wire_cr,
                              run.report.mean_distance, run.report.mean_te_us,
                              run.report.median_te_us);
            }
            if (csv.is_open()) csv << line << "\n";
            std::string spaced(line);
            for (char& c : spaced) {
                if (c == ',') c = ' ';
            }
            std::printf("%s\n", spaced.c_str());
        }
        return 0;
    }

    const RunOutcome run = run_pipeline(input, cf, mf, cf.pt_ms, true);
    print_report(stdout, run.tx.stats, run.report, true);
    if (baseline_random) {
        const EventStream reduced =
            random_reduce(input.stream, run.report.er, in_flags.seed);
        const double baseline = mean_cube_distance(
            astsm_distance(input.stream, reduced, make_metric_params(mf),
                           make_rx_options(cf).parallelism));
        std::printf("baseline_distance        %.6f\n", baseline);
        if (baseline > 0.0) {
            std::printf("distance_vs_baseline     %.2f%% lower\n",
                        100.0 * (1.0 - run.report.mean_distance / baseline));
        }
    }
    if (!recon_out.empty()) {
        write_events(run.recon, recon_out, format_from_path(recon_out));
    }
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw Error("cannot create '" + csv_path + "'");
        csv << "cube_index,t_start_us,distance\n";
        char buf[80];
        for (size_t i = 0; i < run.report.per_cube.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%" PRIu64 ",%.9g\n", i,
                          run.report.per_cube[i].t_start_us,
                          run.report.per_cube[i].distance);
            csv << buf;
        }
    }
    return 0;
}

int cmd_bench(uint32_t n_events, uint32_t pt_ms, const std::string& sweep_pt,
              const std::string& sweep_events, uint64_t seed,
              unsigned parallelism, const std::string& csv_path) {
    using clock = std::chrono::steady_clock;
    if (parallelism == 0) {
        parallelism = std::max(1u, std::thread::hardware_concurrency());
    }

    std::ofstream csv;
    if (!csv_path.empty()) {
        csv.open(csv_path);
        if (!csv) throw Error("cannot create '" + csv_path + "'");
        csv << "sweep,pt_ms,n_events,predict_ms,sort_ms,total_ms,threshold_ms,"
               "realtime,n_predicted\n";
    }
    std::printf("%-8s %6s %9s %11s %9s %9s %12s %9s %11s\n", "sweep", "pt_ms",
                "n_events", "predict_ms", "sort_ms", "total_ms", "threshold_ms",
                "realtime", "n_predicted");

    auto run_one = [&](const char* kind, uint32_t pt, uint32_t n) {
        const auto batch = generate_random_events(n, 1000.0, 640, 480, seed);
        const PredictionWindow win{0, pt * 1000};

        // Untimed warmup so page faults and allocator growth do not land in
        // the measurement; a long-running receiver reuses warm memory.
        {
            auto warm = rx_predict_batch_unsorted(batch, win, 0.4, 640, 480,
                                                  parallelism);
            sort_events(warm);
        }

        // Same path the receiver uses, split so the two phases can be timed
        // separately.
        const auto t0 = clock::now();
        std::vector<Event> preds =
            rx_predict_batch_unsorted(batch, win, 0.4, 640, 480, parallelism);
        const auto t1 = clock::now();
        sort_events(preds);
        const auto t2 = clock::now();

        const double predict_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        const double sort_ms =
            std::chrono::duration<double, std::milli>(t2 - t1).count();
        const double total_ms = predict_ms + sort_ms;
        const bool realtime = total_ms < static_cast<double>(pt);
        std::printf("%-8s %6u %9u %11.3f %9.3f %9.3f %12u %9s %11zu\n", kind, pt,
                    n, predict_ms, sort_ms, total_ms, pt,
                    realtime ? "yes" : "no", preds.size());
        if (csv.is_open()) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s,%u,%u,%.3f,%.3f,%.3f,%u,%d,%zu\n",
                          kind, pt, n, predict_ms, sort_ms, total_ms, pt,
                          realtime ? 1 : 0, preds.size());
            csv << buf;
        }
    };

    // Default run: both standard sweeps (PT at a fixed event count, then
    // event count at a fixed PT).
    std::string pt_range = sweep_pt;
    std::string ev_range = sweep_events;
    if (pt_range.empty() && ev_range.empty()) {
        pt_range = "10:100:10";
        ev_range = "2500:250000:10";
    }
    if (!pt_range.empty()) {
        const SweepRange r = parse_sweep(pt_range);
        for (uint32_t pt = r.lo; pt <= r.hi; pt += r.step) {
            run_one("pt", pt, n_events);
        }
    }
    if (!ev_range.empty()) {
        SweepRange r = parse_sweep(ev_range);
        if (r.step < 2) throw Error("event sweep step is a multiplier >= 2");
        for (uint64_t n = r.lo; n <= r.hi; n *= r.step) {
            run_one("events", pt_ms, static_cast<uint32_t>(n));
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flow-based event-stream compression"};
    app.require_subcommand(1);

    // synth
    InputFlags synth_in;
    std::string synth_out, synth_gt_out;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic scene");
    synth->add_option("--preset", synth_in.preset, "built-in scene")
        ->check(CLI::IsMember({"bar-square", "const-velocity", "bounce"}));
    synth->add_option("--scene", synth_in.scene_file, "scene spec file");
    synth->add_option("--duration-ms", synth_in.duration_ms, "duration, ms");
    synth->add_option("--seed", synth_in.seed, "generator seed");
    synth->add_option("--noise-rate", synth_in.noise_rate, "noise events/s");
    synth->add_option("--out", synth_out, "output event file")->required();
    synth->add_option("--gt-out", synth_gt_out, "ground-truth flow sidecar");

    // compress
    InputFlags comp_in;
    CodecFlags comp_codec;
    std::string comp_out, comp_cascade = "none";
    CLI::App* compress = app.add_subcommand("compress", "events -> packet capture");
    add_input_flags(compress, comp_in, false);
    add_codec_flags(compress, comp_codec);
    compress->add_option("--out", comp_out, "output .fbc or .fbcz")->required();
    compress->add_option("--cascade", comp_cascade, "extra lossless stage")
        ->check(CLI::IsMember({"none", "lzma"}));

    // decompress
    CodecFlags dec_codec;
    std::string dec_in, dec_out;
    CLI::App* decompress =
        app.add_subcommand("decompress", "packet capture -> events");
    decompress->add_option("--in", dec_in, "input .fbc or .fbcz")->required();
    decompress->add_option("--out", dec_out, "output event file")->required();
    add_codec_flags(decompress, dec_codec);

    // simulate
    InputFlags sim_in;
    CodecFlags sim_codec;
    MetricFlags sim_metrics;
    std::string sim_baseline;
    std::string sim_sweep, sim_csv, sim_recon_out;
    CLI::App* simulate =
        app.add_subcommand("simulate", "tx -> rx -> metrics in one process");
    add_input_flags(simulate, sim_in, true);
    add_codec_flags(simulate, sim_codec);
    add_metric_flags(simulate, sim_metrics);
    simulate->add_option("--baseline", sim_baseline,
                         "compare against a reduction baseline at matched ER")
        ->check(CLI::IsMember({"random"}));
    simulate->add_option("--sweep-pt", sim_sweep, "PT sweep lo:hi:step, ms");
    simulate->add_option("--csv", sim_csv, "CSV output path");
    simulate->add_option("--recon-out", sim_recon_out,
                         "write the reconstructed stream");

    // metrics
    InputFlags met_in;
    MetricFlags met_metrics;
    std::string met_orig, met_recon, met_csv;
    CLI::App* metrics =
        app.add_subcommand("metrics", "compare two event streams");
    metrics->add_option("--orig", met_orig, "original stream")->required();
    metrics->add_option("--recon", met_recon, "reconstructed stream")->required();
    add_metric_flags(metrics, met_metrics);
    metrics->add_option("--width", met_in.width, "sensor width for csv/txt");
    metrics->add_option("--height", met_in.height, "sensor height for csv/txt");
    metrics->add_option("--csv", met_csv, "per-cube CSV output");

    // bench
    uint32_t bench_events = 25000, bench_pt = 60;
    std::string bench_sweep_pt, bench_sweep_events, bench_csv;
    uint64_t bench_seed = 0;
    unsigned bench_parallelism = 1;
    CLI::App* bench = app.add_subcommand("bench", "receiver latency benchmark");
    bench->add_option("--events", bench_events, "sent events to predict");
    bench->add_option("--pt-ms", bench_pt, "predict time, ms");
    bench->add_option("--sweep-pt", bench_sweep_pt, "PT sweep lo:hi:step, ms");
    bench->add_option("--sweep-events", bench_sweep_events,
                      "event sweep lo:hi:factor");
    bench->add_option("--seed", bench_seed, "generator seed");
    bench->add_option("--parallelism", bench_parallelism,
                      "prediction threads (0 = hardware)");
    bench->add_option("--csv", bench_csv, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            return cmd_synth(synth_in, synth_out, synth_gt_out);
        }
        if (compress->parsed()) {
            return cmd_compress(comp_in, comp_codec, comp_out, comp_cascade);
        }
        if (decompress->parsed()) {
            return cmd_decompress(dec_in, dec_out, dec_codec);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_in, sim_codec, sim_metrics, sim_baseline,
                                sim_sweep, sim_csv, sim_recon_out);
        }
        if (metrics->parsed()) {
            return cmd_metrics(met_orig, met_recon, met_in, met_metrics, met_csv);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_events, bench_pt, bench_sweep_pt,
                             bench_sweep_events, bench_seed, bench_parallelism,
                             bench_csv);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
