#include "fbc/metrics.hpp"

#include "fbc/error.hpp"
#include "fbc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace fbc {

double event_reduction(uint64_t n_s, uint64_t n_tx) {
    if (n_s == 0) {
        throw Error("event reduction is undefined for an empty stream");
    }
    if (n_tx > n_s) {
        throw Error("transmitted count exceeds stream count");
    }
    return static_cast<double>(n_s - n_tx) / static_cast<double>(n_s);
}

double compression_ratio(uint64_t n_s, uint64_t n_tx, uint64_t n_nf) {
    if (n_nf > n_tx || n_tx > n_s) {
        throw Error("inconsistent event counts");
    }
    if (n_tx == 0) {
        throw Error("compression ratio is undefined when nothing was transmitted");
    }
    const double compressed =
        static_cast<double>(n_tx - n_nf) * 11.0 + static_cast<double>(n_nf) * 8.0;
    return static_cast<double>(n_s) * 8.0 / compressed;
}

namespace {

struct CubeKey {
    uint32_t cx, cy, kt;
    bool operator<(const CubeKey& o) const {
        if (kt != o.kt) return kt < o.kt;
        if (cy != o.cy) return cy < o.cy;
        return cx < o.cx;
    }
};

struct CubeEvents {
    std::vector<Event> a; // original
    std::vector<Event> b; // reconstructed
};

// Sum of the Gaussian kernel over all pairs (u, v), polarity channels kept
// orthogonal. Unnormalized kernel: k(e, e) = 1.
double kernel_sum(const std::vector<Event>& us, const std::vector<Event>& vs,
                  double inv2sx2, double inv2sy2, double inv2st2) {
    double sum = 0.0;
    for (const Event& u : us) {
        for (const Event& v : vs) {
            if (u.p != v.p) continue;
            const double dx = static_cast<double>(u.x) - v.x;
            const double dy = static_cast<double>(u.y) - v.y;
            const double dt = static_cast<double>(u.t) - static_cast<double>(v.t);
            sum += std::exp(-dx * dx * inv2sx2 - dy * dy * inv2sy2 -
                            dt * dt * inv2st2);
        }
    }
    return sum;
}

} // namespace

std::vector<CubeDistance> astsm_distance(const EventStream& orig,
                                         const EventStream& recon,
                                         const MetricParams& params,
                                         unsigned parallelism) {
    const uint32_t cube_w = params.cube_w ? params.cube_w : orig.width;
    const uint32_t cube_h = params.cube_h ? params.cube_h : orig.height;
    const uint32_t cube_len = std::max<uint32_t>(1, params.cube_len_us);

    std::map<CubeKey, CubeEvents> cubes;
    auto key_of = [&](const Event& e) {
        return CubeKey{e.x / cube_w, e.y / cube_h, e.t / cube_len};
    };
    for (const Event& e : orig.events) cubes[key_of(e)].a.push_back(e);
    for (const Event& e : recon.events) cubes[key_of(e)].b.push_back(e);

    std::vector<CubeDistance> out;
    out.reserve(cubes.size());
    std::vector<const CubeEvents*> work;
    work.reserve(cubes.size());
    for (const auto& [key, ce] : cubes) {
        CubeDistance cd;
        cd.cx = key.cx;
        cd.cy = key.cy;
        cd.kt = key.kt;
        cd.t_start_us = static_cast<uint64_t>(key.kt) * cube_len;
        cd.orig_count = ce.a.size();
        cd.recon_count = ce.b.size();
        out.push_back(cd);
        work.push_back(&ce);
    }

    const double inv2sx2 = 1.0 / (2.0 * params.sigma_x * params.sigma_x);
    const double inv2sy2 = 1.0 / (2.0 * params.sigma_y * params.sigma_y);
    const double inv2st2 = 1.0 / (2.0 * params.sigma_t * params.sigma_t);

    auto compute = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            const CubeEvents& ce = *work[i];
            const double aa = kernel_sum(ce.a, ce.a, inv2sx2, inv2sy2, inv2st2);
            const double bb = kernel_sum(ce.b, ce.b, inv2sx2, inv2sy2, inv2st2);
            const double ab = kernel_sum(ce.a, ce.b, inv2sx2, inv2sy2, inv2st2);
            const double sq = std::max(0.0, aa + bb - 2.0 * ab);
            out[i].raw = std::sqrt(sq);
            out[i].distance =
                out[i].raw / std::max<double>(1.0, static_cast<double>(out[i].orig_count));
        }
    };

    if (parallelism <= 1 || out.size() < 2) {
        compute(0, out.size());
    } else {
        const unsigned n_threads =
            std::min<unsigned>(parallelism, static_cast<unsigned>(out.size()));
        const size_t chunk = (out.size() + n_threads - 1) / n_threads;
        std::vector<std::thread> threads;
        for (unsigned ti = 0; ti < n_threads; ++ti) {
            const size_t begin = ti * chunk;
            const size_t end = std::min(out.size(), begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(compute, begin, end);
        }
        for (std::thread& t : threads) t.join();
    }
    return out;
}

double mean_cube_distance(const std::vector<CubeDistance>& cubes) {
    if (cubes.empty()) return 0.0;
    double sum = 0.0;
    for (const CubeDistance& c : cubes) sum += c.distance;
    return sum / static_cast<double>(cubes.size());
}

TemporalErrorResult temporal_error(const EventStream& orig, const EventStream& recon,
                                   int te_window) {
    TemporalErrorResult result;

    // Per-pixel timestamp lists; stream order keeps them sorted.
    const size_t n_pixels = static_cast<size_t>(orig.width) * orig.height;
    std::vector<std::vector<uint32_t>> by_pixel(n_pixels);
    for (const Event& e : orig.events) {
        by_pixel[static_cast<size_t>(e.y) * orig.width + e.x].push_back(e.t);
    }

    std::vector<double> errors;
    errors.reserve(recon.events.size());
    for (const Event& e : recon.events) {
        double best = -1.0;
        for (int dy = -te_window; dy <= te_window; ++dy) {
            const int y = static_cast<int>(e.y) + dy;
            if (y < 0 || y >= orig.height) continue;
            for (int dx = -te_window; dx <= te_window; ++dx) {
                const int x = static_cast<int>(e.x) + dx;
                if (x < 0 || x >= orig.width) continue;
                const auto& ts = by_pixel[static_cast<size_t>(y) * orig.width + x];
                if (ts.empty()) continue;
                auto it = std::lower_bound(ts.begin(), ts.end(), e.t);
                if (it != ts.end()) {
                    const double d = static_cast<double>(*it) - e.t;
                    if (best < 0 || d < best) best = d;
                }
                if (it != ts.begin()) {
                    const double d = static_cast<double>(e.t) - *(it - 1);
                    if (best < 0 || d < best) best = d;
                }
            }
        }
        if (best < 0) {
            ++result.unmatched;
        } else {
            errors.push_back(best);
        }
    }

    result.matched = errors.size();
    if (!errors.empty()) {
        double sum = 0.0;
        for (double v : errors) sum += v;
        result.mean_us = sum / static_cast<double>(errors.size());
        std::sort(errors.begin(), errors.end());
        const size_t n = errors.size();
        result.median_us = n % 2 ? errors[n / 2]
                                 : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
    }
    return result;
}

EventStream random_reduce(const EventStream& stream, double target_er, uint64_t seed) {
    if (target_er < 0.0 || target_er > 1.0) {
        throw Error("target event reduction must be in [0, 1]");
    }
    const size_t n = stream.events.size();
    const size_t n_remove = static_cast<size_t>(
        std::llround(target_er * static_cast<double>(n)));

    // Partial Fisher-Yates over the index array picks the removal set.
    std::vector<uint32_t> indices(n);
    for (size_t i = 0; i < n; ++i) indices[i] = static_cast<uint32_t>(i);
    Rng rng(seed);
    std::vector<bool> removed(n, false);
    for (size_t i = 0; i < n_remove; ++i) {
        const size_t j = i + static_cast<size_t>(rng.bounded(n - i));
        std::swap(indices[i], indices[j]);
        removed[indices[i]] = true;
    }

    EventStream out;
    out.width = stream.width;
    out.height = stream.height;
    out.events.reserve(n - n_remove);
    for (size_t i = 0; i < n; ++i) {
        if (!removed[i]) out.events.push_back(stream.events[i]);
    }
    return out;
}

} // namespace fbc
