#include "hexaplan/kernels.hpp"

#include <algorithm>
#include <limits>

namespace hexaplan::kernels {

void SegmentSoA::push_back(double x0, double y0, double x1, double y1) {
    ax.resize(count_);
    ay.resize(count_);
    bx.resize(count_);
    by.resize(count_);
    ax.push_back(x0);
    ay.push_back(y0);
    bx.push_back(x1);
    by.push_back(y1);
    ++count_;
}

void SegmentSoA::finalize() {
    ax.resize(count_);
    ay.resize(count_);
    bx.resize(count_);
    by.resize(count_);
    if (count_ == 0) return;
    while (ax.size() % 4 != 0) {
        ax.push_back(ax[count_ - 1]);
        ay.push_back(ay[count_ - 1]);
        bx.push_back(bx[count_ - 1]);
        by.push_back(by[count_ - 1]);
    }
}

namespace scalar {

SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs, double px, double py) {
    SegmentHit best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const double dx = segs.bx[k] - segs.ax[k];
        const double dy = segs.by[k] - segs.ay[k];
        const double wx = px - segs.ax[k];
        const double wy = py - segs.ay[k];
        const double dd = dx * dx + dy * dy;
        const double dot = wx * dx + wy * dy;
        double t = dd > 0.0 ? dot / dd : 0.0;
        t = std::max(0.0, std::min(1.0, t));
        const double ex = wx - t * dx;
        const double ey = wy - t * dy;
        const double d2 = ex * ex + ey * ey;
        if (d2 < best.dist_sq) best = {d2, k};
    }
    return best;
}

PairHit min_pair_dist_sq(std::span<const double> xs, std::span<const double> ys) {
    PairHit best{std::numeric_limits<double>::infinity(), 0, 0};
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            const double d2 = dx * dx + dy * dy;
            if (d2 < best.dist_sq) best = {d2, i, j};
        }
    }
    return best;
}

}  // namespace scalar
}  // namespace hexaplan::kernels
