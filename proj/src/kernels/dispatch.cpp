#include "hexaplan/kernels.hpp"

#include <atomic>

namespace hexaplan::kernels {

namespace {

std::atomic<Backend>& current() {
    static std::atomic<Backend> backend{detect_backend()};
    return backend;
}

}  // namespace

const char* to_string(Backend backend) {
    switch (backend) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

Backend detect_backend() {
    if (avx2::available()) return Backend::avx2;
    if (neon::available()) return Backend::neon;
    return Backend::scalar;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

bool force_backend(Backend backend) {
    if (backend == Backend::avx2 && !avx2::available()) return false;
    if (backend == Backend::neon && !neon::available()) return false;
    current().store(backend, std::memory_order_relaxed);
    return true;
}

SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs, double px, double py) {
    switch (active_backend()) {
        case Backend::avx2: return avx2::min_dist_sq_to_segments(segs, px, py);
        case Backend::neon: return neon::min_dist_sq_to_segments(segs, px, py);
        case Backend::scalar: break;
    }
    return scalar::min_dist_sq_to_segments(segs, px, py);
}

PairHit min_pair_dist_sq(std::span<const double> xs, std::span<const double> ys) {
    switch (active_backend()) {
        case Backend::avx2: return avx2::min_pair_dist_sq(xs, ys);
        case Backend::neon: return neon::min_pair_dist_sq(xs, ys);
        case Backend::scalar: break;
    }
    return scalar::min_pair_dist_sq(xs, ys);
}

}  // namespace hexaplan::kernels
