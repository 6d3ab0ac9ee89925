#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinball/billiard.hpp"
#include "pinball/raster.hpp"

namespace pinball::io {

/// Shortest round-trip-safe text: printf "%.17g".
std::string format_double(double x);

/// Writes `s,theta` rows after a header line; Unix newlines.
void write_points_csv(const std::string& path, const std::vector<PhasePoint>& points);

/// Reads a file written by write_points_csv. Throws IoError when the file
/// cannot be opened and ParseError (with the line number) on bad content.
std::vector<PhasePoint> read_points_csv(const std::string& path);

/// Any CSV: header, then rows, each joined with ','.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// Binary graymap (P5), one byte per pixel, maxval 255.
void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels);

/// Binary pixmap (P6), three bytes per pixel, maxval 255.
void write_ppm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& rgb);

/// 255 * log(1 + v) / log(1 + max), rounded; all zero for an empty raster.
std::vector<std::uint8_t> log_scale(const RasterGrid& r);

/// 255 * min(v, top) / top, rounded.
std::vector<std::uint8_t> linear_scale(const RasterGrid& r, std::uint32_t top);

/// Palette 1 red, 2 green, 3 blue, anything else black.
std::vector<std::uint8_t> basin_colors(const RasterGrid& r);

/// Occupancy counts of points on a grid.
RasterGrid hit_counts(const std::vector<PhasePoint>& points, const GridSpec& grid);

} // namespace pinball::io
