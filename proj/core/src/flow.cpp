#include "fbc/flow.hpp"

#include "fbc/error.hpp"

#include <algorithm>
#include <cmath>

namespace fbc {

TimeSurface::TimeSurface(uint16_t width, uint16_t height)
    : width_(width), height_(height) {
    const size_t n = static_cast<size_t>(width) * height;
    planes_[0].assign(n, -1);
    planes_[1].assign(n, -1);
}

void TimeSurface::apply(const Event& e) {
    if (e.x >= width_ || e.y >= height_) {
        throw Error("event outside the time surface");
    }
    planes_[static_cast<size_t>(e.p)][static_cast<size_t>(e.y) * width_ + e.x] = e.t;
}

FlowEstimate plane_fit_flow(const TimeSurface& surface, const Event& e,
                            const PlaneFitParams& params) {
    FlowEstimate out;

    const int r = params.window_radius;
    const int x_lo = std::max(0, static_cast<int>(e.x) - r);
    const int x_hi = std::min(static_cast<int>(surface.width()) - 1, e.x + r);
    const int y_lo = std::max(0, static_cast<int>(e.y) - r);
    const int y_hi = std::min(static_cast<int>(surface.height()) - 1, e.y + r);
    const int64_t t_floor = static_cast<int64_t>(e.t) - params.dt_max_us;

    struct Sample {
        double x, y, t;
    };
    std::vector<Sample> support;
    support.reserve(static_cast<size_t>(2 * r + 1) * (2 * r + 1));
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            const int64_t t = surface.last_ts(e.p, static_cast<uint16_t>(x),
                                              static_cast<uint16_t>(y));
            if (t >= 0 && t >= t_floor && t <= static_cast<int64_t>(e.t)) {
                support.push_back({static_cast<double>(x), static_cast<double>(y),
                                   static_cast<double>(t)});
            }
        }
    }
    if (static_cast<int>(support.size()) < params.min_support) {
        return out;
    }

    // Centered normal equations for t = a*x + b*y + c.
    const double n = static_cast<double>(support.size());
    double mx = 0, my = 0, mt = 0;
    for (const Sample& s : support) {
        mx += s.x;
        my += s.y;
        mt += s.t;
    }
    mx /= n;
    my /= n;
    mt /= n;
    double sxx = 0, sxy = 0, syy = 0, sxt = 0, syt = 0;
    for (const Sample& s : support) {
        const double dx = s.x - mx;
        const double dy = s.y - my;
        const double dt = s.t - mt;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
        sxt += dx * dt;
        syt += dy * dt;
    }
    const double det = sxx * syy - sxy * sxy;
    if (std::abs(det) < 1e-12) {
        return out; // collinear support, plane underdetermined
    }
    const double a = (sxt * syy - syt * sxy) / det; // us/px
    const double b = (syt * sxx - sxt * sxy) / det;

    const double g2 = a * a + b * b;
    if (g2 < 1e-18) {
        // Flat plane: simultaneous neighborhood, treated as zero velocity.
        return out;
    }
    out.vx = a / g2 * 1e6; // px/s
    out.vy = b / g2 * 1e6;

    double sse = 0;
    for (const Sample& s : support) {
        const double r_us = (s.t - mt) - a * (s.x - mx) - b * (s.y - my);
        sse += r_us * r_us;
    }
    const double rms_us = std::sqrt(sse / n);
    out.residual = rms_us / std::sqrt(g2); // px

    const double mag = flow_magnitude(out.vx, out.vy);
    out.valid = out.residual <= params.residual_max_px && mag >= params.v_min &&
                mag <= params.v_max;
    return out;
}

FlowEstimate PlaneFitFlowProvider::estimate(const Event& e, size_t) {
    surface_.apply(e);
    return plane_fit_flow(surface_, e, params_);
}

FlowEstimate OracleFlowProvider::estimate(const Event&, size_t index) {
    FlowEstimate out;
    if (index >= truth_.size()) {
        return out; // not attributable to the scene
    }
    const GroundTruth& gt = truth_[index];
    if (gt.noise) {
        return out;
    }
    out.vx = gt.vx;
    out.vy = gt.vy;
    const double mag = flow_magnitude(gt.vx, gt.vy);
    out.valid = mag >= v_min_ && mag <= v_max_;
    return out;
}

} // namespace fbc
