#include "hexaplan/kernels.hpp"

#include <limits>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace hexaplan::kernels::neon {

#if defined(__aarch64__)

bool available() { return true; }

SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs, double px, double py) {
    const double inf = std::numeric_limits<double>::infinity();
    if (segs.size() == 0) return {inf, 0};

    const float64x2_t vpx = vdupq_n_f64(px);
    const float64x2_t vpy = vdupq_n_f64(py);
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t one = vdupq_n_f64(1.0);
    double value = inf;
    std::size_t index = 0;

    for (std::size_t k = 0; k < segs.padded_size(); k += 2) {
        const float64x2_t ax = vld1q_f64(segs.ax.data() + k);
        const float64x2_t ay = vld1q_f64(segs.ay.data() + k);
        const float64x2_t dx = vsubq_f64(vld1q_f64(segs.bx.data() + k), ax);
        const float64x2_t dy = vsubq_f64(vld1q_f64(segs.by.data() + k), ay);
        const float64x2_t wx = vsubq_f64(vpx, ax);
        const float64x2_t wy = vsubq_f64(vpy, ay);
        const float64x2_t dd = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
        const float64x2_t dot = vaddq_f64(vmulq_f64(wx, dx), vmulq_f64(wy, dy));
        const uint64x2_t positive = vcgtq_f64(dd, zero);
        float64x2_t t = vbslq_f64(positive, vdivq_f64(dot, dd), zero);
        t = vmaxq_f64(zero, vminq_f64(t, one));
        const float64x2_t ex = vsubq_f64(wx, vmulq_f64(t, dx));
        const float64x2_t ey = vsubq_f64(wy, vmulq_f64(t, dy));
        const float64x2_t d2 = vaddq_f64(vmulq_f64(ex, ex), vmulq_f64(ey, ey));
        const double lane0 = vgetq_lane_f64(d2, 0);
        const double lane1 = vgetq_lane_f64(d2, 1);
        if (lane0 < value) {
            value = lane0;
            index = k;
        }
        if (lane1 < value) {
            value = lane1;
            index = k + 1;
        }
    }
    return {value, index};
}

PairHit min_pair_dist_sq(std::span<const double> xs, std::span<const double> ys) {
    const double inf = std::numeric_limits<double>::infinity();
    PairHit result{inf, 0, 0};
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const float64x2_t xi = vdupq_n_f64(xs[i]);
        const float64x2_t yi = vdupq_n_f64(ys[i]);
        std::size_t j = i + 1;
        for (; j + 2 <= n; j += 2) {
            const float64x2_t dx = vsubq_f64(vld1q_f64(xs.data() + j), xi);
            const float64x2_t dy = vsubq_f64(vld1q_f64(ys.data() + j), yi);
            const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
            const double lane0 = vgetq_lane_f64(d2, 0);
            const double lane1 = vgetq_lane_f64(d2, 1);
            if (lane0 < result.dist_sq) result = {lane0, i, j};
            if (lane1 < result.dist_sq) result = {lane1, i, j + 1};
        }
        for (; j < n; ++j) {
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            const double d2 = dx * dx + dy * dy;
            if (d2 < result.dist_sq) result = {d2, i, j};
        }
    }
    return result;
}

#else

bool available() { return false; }

SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs, double px, double py) {
    return scalar::min_dist_sq_to_segments(segs, px, py);
}

PairHit min_pair_dist_sq(std::span<const double> xs, std::span<const double> ys) {
    return scalar::min_pair_dist_sq(xs, ys);
}

#endif

}  // namespace hexaplan::kernels::neon
