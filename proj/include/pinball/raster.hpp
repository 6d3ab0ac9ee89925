#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pinball/billiard.hpp"

namespace pinball {

/// Rectangle of phase space cut into width x height cells. Row 0 is the top
/// (largest theta); cell (r, c) covers s in [s_min + c ds, s_min + (c+1) ds)
/// and theta in (theta_max - (r+1) dtheta, theta_max - r dtheta].
struct GridSpec {
    double s_min = 0.0;
    double s_max = 3.0;
    double theta_min = -0.5 * kPi;
    double theta_max = 0.5 * kPi;
    int width = 400;
    int height = 400;

    double ds() const { return (s_max - s_min) / width; }
    double dtheta() const { return (theta_max - theta_min) / height; }
    std::size_t cells() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }

    PhasePoint center(int row, int col) const {
        return {s_min + (col + 0.5) * ds(), theta_max - (row + 0.5) * dtheta()};
    }

    struct Cell {
        int row;
        int col;
    };

    /// Cell containing p, or nothing when p is outside the rectangle.
    std::optional<Cell> locate(const PhasePoint& p) const;
    std::optional<Cell> locate(double s, double theta) const { return locate(PhasePoint{s, theta}); }

    /// Full phase space (0,3) x (-pi/2, pi/2).
    static GridSpec full(int width, int height);
    /// Upper half of side 0: [0,1] x [0, pi/2].
    static GridSpec side0_upper(int width, int height);
};

struct RasterGrid {
    GridSpec spec;
    std::vector<std::uint32_t> values; ///< row-major

    RasterGrid() = default;
    explicit RasterGrid(const GridSpec& g) : spec(g), values(g.cells(), 0) {}

    std::uint32_t& at(int row, int col) { return values[static_cast<std::size_t>(row) * spec.width + col]; }
    std::uint32_t at(int row, int col) const { return values[static_cast<std::size_t>(row) * spec.width + col]; }
    std::uint32_t max_value() const;
};

} // namespace pinball
