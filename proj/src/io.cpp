#include "pinball/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pinball/errors.hpp"

namespace pinball::io {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to " + path + " failed");
}

double parse_field(const std::string& field, const std::string& path, std::size_t line) {
    if (field.empty()) throw ParseError(path + ":" + std::to_string(line) + ": empty field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError(path + ":" + std::to_string(line) + ": not a number: '" + field + "'");
    }
    return v;
}

} // namespace

void write_points_csv(const std::string& path, const std::vector<PhasePoint>& points) {
    std::ofstream out = open_out(path);
    out << "s,theta\n";
    for (const PhasePoint& p : points) out << format_double(p.s) << ',' << format_double(p.theta) << '\n';
    finish(out, path);
}

std::vector<PhasePoint> read_points_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "s,theta") throw ParseError(path + ":1: expected header 's,theta', got '" + line + "'");
    std::vector<PhasePoint> points;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ParseError(path + ":" + std::to_string(n) + ": expected two fields");
        }
        points.push_back({parse_field(line.substr(0, comma), path, n), parse_field(line.substr(comma + 1), path, n)});
    }
    return points;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out = open_out(path);
    auto put = [&](const std::vector<std::string>& fields) {
        for (std::size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << fields[k];
        out << '\n';
    };
    put(header);
    for (const auto& r : rows) put(r);
    finish(out, path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out = open_out(path);
    out << text;
    finish(out, path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels) {
    if (pixels.size() != static_cast<std::size_t>(width) * height) throw DomainError("write_pgm: size mismatch");
    std::ofstream out = open_out(path);
    out << "P5\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    finish(out, path);
}

void write_ppm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& rgb) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3) throw DomainError("write_ppm: size mismatch");
    std::ofstream out = open_out(path);
    out << "P6\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
    finish(out, path);
}

std::vector<std::uint8_t> log_scale(const RasterGrid& r) {
    std::vector<std::uint8_t> px(r.values.size(), 0);
    const std::uint32_t top = r.max_value();
    if (top == 0) return px;
    const double norm = std::log1p(static_cast<double>(top));
    for (std::size_t k = 0; k < px.size(); ++k) {
        px[k] = static_cast<std::uint8_t>(std::lround(255.0 * std::log1p(static_cast<double>(r.values[k])) / norm));
    }
    return px;
}

std::vector<std::uint8_t> linear_scale(const RasterGrid& r, std::uint32_t top) {
    std::vector<std::uint8_t> px(r.values.size(), 0);
    if (top == 0) return px;
    for (std::size_t k = 0; k < px.size(); ++k) {
        const std::uint32_t v = std::min(r.values[k], top);
        px[k] = static_cast<std::uint8_t>((255ull * v + top / 2) / top);
    }
    return px;
}

std::vector<std::uint8_t> basin_colors(const RasterGrid& r) {
    std::vector<std::uint8_t> rgb(r.values.size() * 3, 0);
    for (std::size_t k = 0; k < r.values.size(); ++k) {
        const std::uint32_t id = r.values[k];
        if (id >= 1 && id <= 3) rgb[3 * k + (id - 1)] = 255;
    }
    return rgb;
}

RasterGrid hit_counts(const std::vector<PhasePoint>& points, const GridSpec& grid) {
    RasterGrid r(grid);
    for (const PhasePoint& p : points) {
        if (auto c = grid.locate(p)) ++r.at(c->row, c->col);
    }
    return r;
}

} // namespace pinball::io
