#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and SIMD
// variants (AVX2 on x86-64, NEON on aarch64); the variant is picked once at
// runtime from the CPU's feature bits and can be forced for testing.

#include <cstddef>
#include <span>
#include <vector>

namespace hexaplan::kernels {

enum class Backend { scalar, avx2, neon };

const char* to_string(Backend backend);

/// Best backend the running CPU supports.
Backend detect_backend();

/// Backend currently used by the dispatching entry points.
Backend active_backend();

/// Override the dispatch choice. Returns false (and changes nothing) when the
/// requested backend is not available on this CPU or build.
bool force_backend(Backend backend);

/// Line segments stored as structure-of-arrays, padded with copies of the
/// last segment up to a multiple of 4 so vector loops need no tail handling.
class SegmentSoA {
public:
    void push_back(double ax, double ay, double bx, double by);
    void finalize();

    std::size_t size() const noexcept { return count_; }
    std::size_t padded_size() const noexcept { return ax.size(); }

    std::vector<double> ax, ay, bx, by;

private:
    std::size_t count_ = 0;
};

struct SegmentHit {
    double dist_sq;
    std::size_t index;  // segment achieving the minimum
};

struct PairHit {
    double dist_sq;
    std::size_t i, j;  // i < j
};

/// Squared distance from (px, py) to the closest segment.
SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs, double px, double py);

/// Closest pair among the points (xs[k], ys[k]). Requires size >= 2.
PairHit min_pair_dist_sq(std::span<const double> xs, std::span<const double> ys);

namespace scalar {
SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs, double px, double py);
PairHit min_pair_dist_sq(std::span<const double> xs, std::span<const double> ys);
}  // namespace scalar

namespace avx2 {
bool available();
SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs, double px, double py);
PairHit min_pair_dist_sq(std::span<const double> xs, std::span<const double> ys);
}  // namespace avx2

namespace neon {
bool available();
SegmentHit min_dist_sq_to_segments(const SegmentSoA& segs, double px, double py);
PairHit min_pair_dist_sq(std::span<const double> xs, std::span<const double> ys);
}  // namespace neon

}  // namespace hexaplan::kernels
