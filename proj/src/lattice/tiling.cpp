#include <cmath>
#include <numbers>

#include "hexaplan/error.hpp"
#include "hexaplan/lattice.hpp"

namespace hexaplan {

const char* to_string(TilingKind kind) {
    switch (kind) {
        case TilingKind::hexagonal: return "hexagonal";
        case TilingKind::square: return "square";
        case TilingKind::triangular: return "triangular";
    }
    return "?";
}

TilingKind tiling_kind_from_string(const std::string& name) {
    if (name == "hexagonal" || name == "hex") return TilingKind::hexagonal;
    if (name == "square") return TilingKind::square;
    if (name == "triangular" || name == "tri") return TilingKind::triangular;
    throw Error(ErrorKind::input, "unknown tiling kind: " + name);
}

// Robots at the midpoints of two edges meeting at angle theta are s*sin(theta/2)
// apart; that is the closest concurrent approach, and it must be >= 2r.
double min_safe_side(TilingKind kind, double robot_radius) {
    switch (kind) {
        case TilingKind::hexagonal: return 4.0 * robot_radius / std::sqrt(3.0);
        case TilingKind::square: return 4.0 * robot_radius / std::sqrt(2.0);
        case TilingKind::triangular: return 4.0 * robot_radius;
    }
    return 0.0;
}

double tiling_density(TilingKind kind) {
    const double s = min_safe_side(kind, 1.0);
    const double disc = std::numbers::pi;
    switch (kind) {
        case TilingKind::hexagonal: {
            // Two nodes per hexagon of area (3 sqrt(3) / 2) s^2.
            const double area = 1.5 * std::sqrt(3.0) * s * s;
            return 2.0 * disc / area;
        }
        case TilingKind::square: return disc / (s * s);
        case TilingKind::triangular: {
            // Half a node per triangle of area (sqrt(3) / 4) s^2.
            const double area = 0.25 * std::sqrt(3.0) * s * s;
            return 0.5 * disc / area;
        }
    }
    return 0.0;
}

TilingSpec TilingSpec::minimal(TilingKind kind, double robot_radius, double epsilon) {
    return {kind, min_safe_side(kind, robot_radius) * (1.0 + epsilon), epsilon};
}

void TilingSpec::validate(double robot_radius) const {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::input, "tiling epsilon must be > 0");
    const double minimum = min_safe_side(kind, robot_radius) * (1.0 + epsilon);
    if (!(side >= minimum * (1.0 - 1e-12)))
        throw Error(ErrorKind::input, "tiling side " + std::to_string(side) +
                                          " is below the collision-safe minimum " +
                                          std::to_string(minimum));
}

}  // namespace hexaplan
