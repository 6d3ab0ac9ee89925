#include "pinball/raster.hpp"

#include <algorithm>
#include <cmath>

namespace pinball {

std::optional<GridSpec::Cell> GridSpec::locate(const PhasePoint& p) const {
    if (!(p.s >= s_min && p.s < s_max && p.theta > theta_min && p.theta <= theta_max)) {
        return std::nullopt;
    }
    int col = static_cast<int>(std::floor((p.s - s_min) / ds()));
    int row = static_cast<int>(std::ceil((theta_max - p.theta) / dtheta())) - 1;
    // Rounding at the edges.
    col = std::clamp(col, 0, width - 1);
    row = std::clamp(row, 0, height - 1);
    return Cell{row, col};
}

GridSpec GridSpec::full(int width, int height) {
    GridSpec g;
    g.width = width;
    g.height = height;
    return g;
}

GridSpec GridSpec::side0_upper(int width, int height) {
    GridSpec g;
    g.s_min = 0.0;
    g.s_max = 1.0;
    g.theta_min = 0.0;
    g.theta_max = 0.5 * kPi;
    g.width = width;
    g.height = height;
    return g;
}

std::uint32_t RasterGrid::max_value() const {
    return values.empty() ? 0 : *std::max_element(values.begin(), values.end());
}

} // namespace pinball
