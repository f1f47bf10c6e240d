#include "hexaplan/kernels.hpp"

#include <limits>

#if defined(__x86_64__) || defined(_M_X64)
#define HEXAPLAN_X86 1
#include <immintrin.h>
#else
#define HEXAPLAN_X86 0
#endif

namespace hexaplan::kernels::avx2 {

#if HEXAPLAN_X86

namespace {

struct Lanes {
    alignas(32) double value[4];
    alignas(32) double index[4];
};

// Lexicographic (value, index) minimum over the four lanes.
__attribute__((target("avx2"))) void reduce(__m256d value, __m256d index, double& best,
                                            double& best_index) {
    Lanes lanes;
    _mm256_store_pd(lanes.value, value);
    _mm256_store_pd(lanes.index, index);
    for (int l = 0; l < 4; ++l) {
        if (lanes.value[l] < best || (lanes.value[l] == best && lanes.index[l] < best_index)) {
            best = lanes.value[l];
            best_index = lanes.index[l];
        }
    }
}

}  // namespace

bool available() {
    return __builtin_cpu_supports("avx2");
}

__attribute__((target("avx2"))) SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs,
                                                                   double px, double py) {
    const double inf = std::numeric_limits<double>::infinity();
    if (segs.size() == 0) return {inf, 0};

    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d best = _mm256_set1_pd(inf);
    __m256d best_idx = _mm256_setzero_pd();
    __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

    const std::size_t n = segs.padded_size();
    for (std::size_t k = 0; k < n; k += 4) {
        const __m256d ax = _mm256_loadu_pd(segs.ax.data() + k);
        const __m256d ay = _mm256_loadu_pd(segs.ay.data() + k);
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(segs.bx.data() + k), ax);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(segs.by.data() + k), ay);
        const __m256d wx = _mm256_sub_pd(vpx, ax);
        const __m256d wy = _mm256_sub_pd(vpy, ay);
        const __m256d dd = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        const __m256d dot = _mm256_add_pd(_mm256_mul_pd(wx, dx), _mm256_mul_pd(wy, dy));
        const __m256d positive = _mm256_cmp_pd(dd, zero, _CMP_GT_OQ);
        __m256d t = _mm256_blendv_pd(zero, _mm256_div_pd(dot, dd), positive);
        t = _mm256_max_pd(zero, _mm256_min_pd(t, one));
        const __m256d ex = _mm256_sub_pd(wx, _mm256_mul_pd(t, dx));
        const __m256d ey = _mm256_sub_pd(wy, _mm256_mul_pd(t, dy));
        const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey));
        const __m256d lt = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
        best = _mm256_blendv_pd(best, d2, lt);
        best_idx = _mm256_blendv_pd(best_idx, idx, lt);
        idx = _mm256_add_pd(idx, four);
    }

    double value = inf;
    double index = 0.0;
    reduce(best, best_idx, value, index);
    return {value, static_cast<std::size_t>(index)};
}

__attribute__((target("avx2"))) PairHit min_pair_dist_sq(std::span<const double> xs,
                                                        std::span<const double> ys) {
    const double inf = std::numeric_limits<double>::infinity();
    PairHit result{inf, 0, 0};
    const std::size_t n = xs.size();
    const __m256d four = _mm256_set1_pd(4.0);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const __m256d xi = _mm256_set1_pd(xs[i]);
        const __m256d yi = _mm256_set1_pd(ys[i]);
        __m256d best = _mm256_set1_pd(inf);
        __m256d best_idx = _mm256_setzero_pd();
        std::size_t j = i + 1;
        __m256d idx = _mm256_set_pd(double(j + 3), double(j + 2), double(j + 1), double(j));
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + j), xi);
            const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + j), yi);
            const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            const __m256d lt = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
            best = _mm256_blendv_pd(best, d2, lt);
            best_idx = _mm256_blendv_pd(best_idx, idx, lt);
            idx = _mm256_add_pd(idx, four);
        }
        double value = inf;
        double index = 0.0;
        reduce(best, best_idx, value, index);
        for (; j < n; ++j) {
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            const double d2 = dx * dx + dy * dy;
            if (d2 < value) {
                value = d2;
                index = double(j);
            }
        }
        if (value < result.dist_sq) result = {value, i, static_cast<std::size_t>(index)};
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

}  // namespace hexaplan::kernels::avx2
