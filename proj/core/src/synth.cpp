#include "fbc/synth.hpp"

#include "fbc/error.hpp"
#include "fbc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fbc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Center position / velocity of an object at time t (seconds).
struct MotionEval {
    const SceneObject* obj;
    // Precomputed segment start positions for piecewise motion.
    std::vector<double> seg_cx, seg_cy;

    explicit MotionEval(const SceneObject& o) : obj(&o) {
        if (o.motion.kind == Motion::Kind::Piecewise) {
            double cx = o.cx0, cy = o.cy0;
            const auto& segs = o.motion.segments;
            seg_cx.resize(segs.size());
            seg_cy.resize(segs.size());
            for (size_t i = 0; i < segs.size(); ++i) {
                seg_cx[i] = cx;
                seg_cy[i] = cy;
                const double t0 = segs[i].t_start_us * 1e-6;
                const double t1 = (i + 1 < segs.size())
                                      ? segs[i + 1].t_start_us * 1e-6
                                      : t0; // final extent handled by caller
                cx += segs[i].vx * (t1 - t0);
                cy += segs[i].vy * (t1 - t0);
            }
        }
    }

    size_t segment_at(double t_s) const {
        const auto& segs = obj->motion.segments;
        size_t i = 0;
        while (i + 1 < segs.size() && t_s >= segs[i + 1].t_start_us * 1e-6) ++i;
        return i;
    }

    void position(double t_s, double& cx, double& cy) const {
        const Motion& m = obj->motion;
        if (m.kind == Motion::Kind::OscillateY) {
            cx = obj->cx0;
            cy = obj->cy0 +
                 m.amplitude_px * std::sin(kTwoPi * m.freq_hz * t_s + m.phase_rad);
        } else {
            const size_t i = segment_at(t_s);
            const double dt = t_s - m.segments[i].t_start_us * 1e-6;
            cx = seg_cx[i] + m.segments[i].vx * dt;
            cy = seg_cy[i] + m.segments[i].vy * dt;
        }
    }

    void velocity(double t_s, double& vx, double& vy) const {
        const Motion& m = obj->motion;
        if (m.kind == Motion::Kind::OscillateY) {
            vx = 0.0;
            vy = m.amplitude_px * kTwoPi * m.freq_hz *
                 std::cos(kTwoPi * m.freq_hz * t_s + m.phase_rad);
        } else {
            const size_t i = segment_at(t_s);
            vx = m.segments[i].vx;
            vy = m.segments[i].vy;
        }
    }

    double peak_speed() const {
        const Motion& m = obj->motion;
        if (m.kind == Motion::Kind::OscillateY) {
            return std::abs(m.amplitude_px) * kTwoPi * m.freq_hz;
        }
        double peak = 0.0;
        for (const MotionSegment& s : m.segments) {
            peak = std::max(peak, std::hypot(s.vx, s.vy));
        }
        return peak;
    }
};

// All t in (0, end_s) where a linear coordinate p0 + v*(t - t0) crosses
// `level` within [t0, t1).
void linear_crossings(double p0, double v, double t0, double t1, double level,
                      std::vector<double>& out) {
    if (v == 0.0) return;
    const double t = t0 + (level - p0) / v;
    if (t >= t0 && t < t1) out.push_back(t);
}

// All t in (0, end_s) where cy0 + A*sin(w*t + phi) crosses `level`.
void sine_crossings(double cy0, double amp, double omega, double phi,
                    double end_s, double level, std::vector<double>& out) {
    if (amp == 0.0) return;
    const double u = (level - cy0) / amp;
    if (u < -1.0 || u > 1.0) return;
    const double base = std::asin(u);
    for (const double theta0 : {base, std::numbers::pi - base}) {
        // theta = theta0 + 2*pi*k; t = (theta - phi) / omega
        const double k_lo = std::floor((phi - theta0) / kTwoPi) - 1;
        const double k_hi = std::ceil((omega * end_s + phi - theta0) / kTwoPi) + 1;
        for (double k = k_lo; k <= k_hi; ++k) {
            const double t = (theta0 + kTwoPi * k - phi) / omega;
            if (t > 0.0 && t < end_s) out.push_back(t);
        }
    }
}

struct RawEvent {
    Event event;
    GroundTruth truth;
};

void generate_object(const SceneObject& obj, const SceneSpec& scene,
                     std::vector<RawEvent>& out) {
    if (obj.width_px <= 0.0 || obj.height_px <= 0.0) {
        throw Error("scene object '" + obj.name + "' has zero size");
    }
    if (obj.motion.kind == Motion::Kind::Piecewise &&
        (obj.motion.segments.empty() || obj.motion.segments[0].t_start_us != 0)) {
        throw Error("scene object '" + obj.name + "' needs segments starting at 0");
    }
    const MotionEval motion(obj);
    if (motion.peak_speed() > 2047.0) {
        throw Error("scene object '" + obj.name + "' exceeds the 2047 px/s ceiling");
    }

    const double end_s = scene.duration_us * 1e-6;
    const double hw = obj.width_px / 2.0;
    const double hh = obj.height_px / 2.0;

    // Bounding box of the center path. Piecewise-linear paths take their
    // extremes at segment breakpoints; the sinusoid is bounded by amplitude.
    double cx_min, cx_max, cy_min, cy_max;
    if (obj.motion.kind == Motion::Kind::OscillateY) {
        cx_min = cx_max = obj.cx0;
        cy_min = obj.cy0 - std::abs(obj.motion.amplitude_px);
        cy_max = obj.cy0 + std::abs(obj.motion.amplitude_px);
    } else {
        std::vector<double> probes{0.0, end_s};
        for (const MotionSegment& s : obj.motion.segments) {
            probes.push_back(std::min(end_s, s.t_start_us * 1e-6));
        }
        cx_min = cy_min = 1e300;
        cx_max = cy_max = -1e300;
        for (double t : probes) {
            double cx, cy;
            motion.position(t, cx, cy);
            cx_min = std::min(cx_min, cx);
            cx_max = std::max(cx_max, cx);
            cy_min = std::min(cy_min, cy);
            cy_max = std::max(cy_max, cy);
        }
    }
    const int x_lo = std::max(0, static_cast<int>(std::floor(cx_min - hw)) - 1);
    const int x_hi = std::min(static_cast<int>(scene.width) - 1,
                              static_cast<int>(std::ceil(cx_max + hw)) + 1);
    const int y_lo = std::max(0, static_cast<int>(std::floor(cy_min - hh)) - 1);
    const int y_hi = std::min(static_cast<int>(scene.height) - 1,
                              static_cast<int>(std::ceil(cy_max + hh)) + 1);

    const Motion& m = obj.motion;
    std::vector<double> crossings;
    for (int iy = y_lo; iy <= y_hi; ++iy) {
        for (int ix = x_lo; ix <= x_hi; ++ix) {
            crossings.clear();
            // Crossing times of both edges on both axes.
            if (m.kind == Motion::Kind::OscillateY) {
                if (std::abs(ix - obj.cx0) >= hw) continue; // never covered in x
                const double omega = kTwoPi * m.freq_hz;
                sine_crossings(obj.cy0, m.amplitude_px, omega, m.phase_rad, end_s,
                               iy - hh, crossings);
                sine_crossings(obj.cy0, m.amplitude_px, omega, m.phase_rad, end_s,
                               iy + hh, crossings);
            } else {
                const auto& segs = m.segments;
                for (size_t i = 0; i < segs.size(); ++i) {
                    const double t0 = segs[i].t_start_us * 1e-6;
                    if (t0 >= end_s) break;
                    const double t1 = (i + 1 < segs.size())
                                          ? std::min(end_s, segs[i + 1].t_start_us * 1e-6)
                                          : end_s;
                    linear_crossings(motion.seg_cx[i], segs[i].vx, t0, t1, ix - hw,
                                     crossings);
                    linear_crossings(motion.seg_cx[i], segs[i].vx, t0, t1, ix + hw,
                                     crossings);
                    linear_crossings(motion.seg_cy[i], segs[i].vy, t0, t1, iy - hh,
                                     crossings);
                    linear_crossings(motion.seg_cy[i], segs[i].vy, t0, t1, iy + hh,
                                     crossings);
                }
            }
            if (crossings.empty()) continue;
            std::sort(crossings.begin(), crossings.end());
            crossings.erase(std::unique(crossings.begin(), crossings.end(),
                                        [](double a, double b) {
                                            return std::abs(a - b) < 1e-9;
                                        }),
                            crossings.end());

            auto occupied_at = [&](double t_s) {
                double cx, cy;
                motion.position(t_s, cx, cy);
                return std::abs(ix - cx) < hw && std::abs(iy - cy) < hh;
            };

            // Occupancy transitions between consecutive intervals emit events.
            std::vector<double> bounds;
            bounds.reserve(crossings.size() + 2);
            bounds.push_back(0.0);
            for (double t : crossings) {
                if (t > 0.0 && t < end_s) bounds.push_back(t);
            }
            bounds.push_back(end_s);
            bool prev = occupied_at((bounds[0] + bounds[1]) / 2.0);
            for (size_t j = 1; j + 1 < bounds.size(); ++j) {
                const bool cur = occupied_at((bounds[j] + bounds[j + 1]) / 2.0);
                if (cur != prev) {
                    RawEvent re;
                    re.event.x = static_cast<uint16_t>(ix);
                    re.event.y = static_cast<uint16_t>(iy);
                    re.event.t = static_cast<uint32_t>(std::llround(bounds[j] * 1e6));
                    const bool on = cur != obj.invert_polarity;
                    re.event.p = on ? Polarity::On : Polarity::Off;
                    motion.velocity(bounds[j], re.truth.vx, re.truth.vy);
                    re.truth.noise = false;
                    out.push_back(re);
                    prev = cur;
                }
            }
        }
    }
}

} // namespace

SynthResult generate(const SceneSpec& scene) {
    if (scene.width == 0 || scene.height == 0 || scene.duration_us == 0) {
        throw Error("scene needs a nonzero sensor size and duration");
    }
    std::vector<RawEvent> raw;
    for (const SceneObject& obj : scene.objects) {
        generate_object(obj, scene, raw);
    }

    const double duration_s = scene.duration_us * 1e-6;
    const auto n_noise =
        static_cast<size_t>(std::llround(scene.noise_rate_hz * duration_s));
    Rng rng(scene.seed);
    for (size_t i = 0; i < n_noise; ++i) {
        RawEvent re;
        re.event.x = static_cast<uint16_t>(rng.bounded(scene.width));
        re.event.y = static_cast<uint16_t>(rng.bounded(scene.height));
        re.event.t = static_cast<uint32_t>(rng.bounded(scene.duration_us));
        re.event.p = rng.bounded(2) ? Polarity::On : Polarity::Off;
        re.truth = GroundTruth{0.0, 0.0, true};
        raw.push_back(re);
    }

    std::sort(raw.begin(), raw.end(), [](const RawEvent& a, const RawEvent& b) {
        if (a.event != b.event) return event_less(a.event, b.event);
        if (a.truth.vx != b.truth.vx) return a.truth.vx < b.truth.vx;
        if (a.truth.vy != b.truth.vy) return a.truth.vy < b.truth.vy;
        return a.truth.noise < b.truth.noise;
    });

    SynthResult result;
    result.stream.width = scene.width;
    result.stream.height = scene.height;
    result.stream.events.reserve(raw.size());
    result.truth.reserve(raw.size());
    for (const RawEvent& re : raw) {
        result.stream.events.push_back(re.event);
        result.truth.push_back(re.truth);
    }
    return result;
}

std::vector<FlowEvent> generate_random_events(size_t n, double vel_range_px_s,
                                              uint16_t width, uint16_t height,
                                              uint64_t seed, double v_min) {
    Rng rng(seed);
    std::vector<FlowEvent> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        FlowEvent fe;
        fe.event.x = static_cast<uint16_t>(rng.bounded(width));
        fe.event.y = static_cast<uint16_t>(rng.bounded(height));
        fe.event.t = 0;
        fe.event.p = rng.bounded(2) ? Polarity::On : Polarity::Off;
        do {
            fe.vx = rng.uniform(-vel_range_px_s, vel_range_px_s);
            fe.vy = rng.uniform(-vel_range_px_s, vel_range_px_s);
        } while (flow_magnitude(fe.vx, fe.vy) < v_min);
        out.push_back(fe);
    }
    return out;
}

SceneSpec preset_scene(const std::string& name, uint32_t duration_us, uint64_t seed) {
    SceneSpec scene;
    scene.width = 320;
    scene.height = 240;
    scene.duration_us = duration_us;
    scene.seed = seed;

    if (name == "bar-square") {
        // Two objects oscillating vertically; peak speed ~201 px/s, mean ~128.
        SceneObject bar;
        bar.name = "bar";
        bar.cx0 = 80;
        bar.cy0 = 120;
        bar.width_px = 6;
        bar.height_px = 60;
        bar.motion.kind = Motion::Kind::OscillateY;
        bar.motion.amplitude_px = 40;
        bar.motion.freq_hz = 0.8;
        bar.motion.phase_rad = 0.0;
        scene.objects.push_back(bar);

        SceneObject square;
        square.name = "square";
        square.cx0 = 220;
        square.cy0 = 120;
        square.width_px = 40;
        square.height_px = 40;
        square.motion.kind = Motion::Kind::OscillateY;
        square.motion.amplitude_px = 40;
        square.motion.freq_hz = 0.8;
        square.motion.phase_rad = std::numbers::pi / 2;
        scene.objects.push_back(square);
        return scene;
    }
    if (name == "const-velocity") {
        SceneObject square;
        square.name = "square";
        square.cx0 = 35;
        square.cy0 = 120;
        square.width_px = 30;
        square.height_px = 30;
        square.motion.kind = Motion::Kind::Piecewise;
        square.motion.segments.push_back({0, 120.0, 0.0});
        scene.objects.push_back(square);
        return scene;
    }
    if (name == "bounce") {
        // Triangle-wave vertical oscillation: constant speed inside each
        // half-period, abrupt reversals. The de-phased flips keep the two
        // objects from going quiet at the same instant.
        SceneObject bar;
        bar.name = "bar";
        bar.cx0 = 80;
        bar.cy0 = 120;
        bar.width_px = 6;
        bar.height_px = 60;
        bar.motion.kind = Motion::Kind::Piecewise;
        for (uint32_t k = 0; k * 400000 < duration_us; ++k) {
            bar.motion.segments.push_back({k * 400000, 0.0, k % 2 ? -120.0 : 120.0});
        }
        scene.objects.push_back(bar);

        SceneObject square;
        square.name = "square";
        square.cx0 = 220;
        square.cy0 = 120;
        square.width_px = 40;
        square.height_px = 40;
        square.motion.kind = Motion::Kind::Piecewise;
        square.motion.segments.push_back({0, 0.0, 110.0});
        for (uint32_t k = 0; 200000 + k * 400000 < duration_us; ++k) {
            square.motion.segments.push_back(
                {200000 + k * 400000, 0.0, k % 2 ? 110.0 : -110.0});
        }
        scene.objects.push_back(square);
        return scene;
    }
    throw Error("unknown scene preset '" + name + "'");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

double to_double(const std::string& s, const std::string& key) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("bad numeric value '" + s + "' for " + key);
    }
}

SceneObject parse_object(const std::vector<std::string>& tokens) {
    SceneObject obj;
    std::string motion_kind = "linear";
    double vx = 0, vy = 0, amp = 0, freq = 0, phase = 0;
    std::vector<MotionSegment> segments;

    for (size_t i = 1; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        const size_t eq = tok.find('=');
        if (eq == std::string::npos) {
            throw Error("object token '" + tok + "' is not key=value");
        }
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "name") obj.name = val;
        else if (key == "x") obj.cx0 = to_double(val, key);
        else if (key == "y") obj.cy0 = to_double(val, key);
        else if (key == "w") obj.width_px = to_double(val, key);
        else if (key == "h") obj.height_px = to_double(val, key);
        else if (key == "motion") motion_kind = val;
        else if (key == "vx") vx = to_double(val, key);
        else if (key == "vy") vy = to_double(val, key);
        else if (key == "amp") amp = to_double(val, key);
        else if (key == "freq") freq = to_double(val, key);
        else if (key == "phase") phase = to_double(val, key);
        else if (key == "invert") obj.invert_polarity = val == "1" || val == "true";
        else if (key == "seg") {
            // t_us:vx:vy
            const size_t c1 = val.find(':');
            const size_t c2 = val.find(':', c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos) {
                throw Error("segment '" + val + "' is not t_us:vx:vy");
            }
            MotionSegment seg;
            seg.t_start_us = static_cast<uint32_t>(
                to_double(val.substr(0, c1), "seg time"));
            seg.vx = to_double(val.substr(c1 + 1, c2 - c1 - 1), "seg vx");
            seg.vy = to_double(val.substr(c2 + 1), "seg vy");
            segments.push_back(seg);
        } else {
            throw Error("unknown object key '" + key + "'");
        }
    }

    if (motion_kind == "linear") {
        obj.motion.kind = Motion::Kind::Piecewise;
        obj.motion.segments.push_back({0, vx, vy});
    } else if (motion_kind == "segments") {
        obj.motion.kind = Motion::Kind::Piecewise;
        obj.motion.segments = segments;
    } else if (motion_kind == "oscillate-y") {
        obj.motion.kind = Motion::Kind::OscillateY;
        obj.motion.amplitude_px = amp;
        obj.motion.freq_hz = freq;
        obj.motion.phase_rad = phase;
    } else {
        throw Error("unknown motion kind '" + motion_kind + "'");
    }
    return obj;
}

} // namespace

SceneSpec parse_scene_spec(const std::string& text) {
    SceneSpec scene;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::vector<std::string> tokens = split_ws(line);
        if (tokens.empty()) continue;
        try {
            if (tokens[0] == "object") {
                scene.objects.push_back(parse_object(tokens));
                continue;
            }
            // Global lines: key = value (or key=value).
            std::string key, value;
            if (tokens.size() == 3 && tokens[1] == "=") {
                key = tokens[0];
                value = tokens[2];
            } else if (tokens.size() == 1 &&
                       tokens[0].find('=') != std::string::npos) {
                const size_t eq = tokens[0].find('=');
                key = tokens[0].substr(0, eq);
                value = tokens[0].substr(eq + 1);
            } else {
                throw Error("expected key = value");
            }
            if (key == "sensor") {
                const size_t x = value.find('x');
                if (x == std::string::npos) throw Error("sensor must be WxH");
                scene.width = static_cast<uint16_t>(
                    to_double(value.substr(0, x), "sensor width"));
                scene.height = static_cast<uint16_t>(
                    to_double(value.substr(x + 1), "sensor height"));
            } else if (key == "duration_ms") {
                scene.duration_us =
                    static_cast<uint32_t>(to_double(value, key) * 1000.0);
            } else if (key == "duration_us") {
                scene.duration_us = static_cast<uint32_t>(to_double(value, key));
            } else if (key == "seed") {
                scene.seed = static_cast<uint64_t>(to_double(value, key));
            } else if (key == "noise_rate") {
                scene.noise_rate_hz = to_double(value, key);
            } else {
                throw Error("unknown scene key '" + key + "'");
            }
        } catch (const Error& e) {
            throw Error("scene spec line " + std::to_string(line_no) + ": " +
                        e.what());
        }
    }
    return scene;
}

SceneSpec load_scene_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open scene spec '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene_spec(buf.str());
}

} // namespace fbc
