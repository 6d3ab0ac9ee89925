#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace pinball {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt3 = std::numbers::sqrt3;

/// Absolute tolerance, in arc length on the landing side, below which a
/// collision is treated as a vertex hit.
inline constexpr double kVertexEps = 1e-12;

/// Where a ray meets a side: arc-length parameter along the side and
/// distance travelled.
struct RayHit {
    double u = 0.0; ///< in [0,1] along the side, 0 at its first vertex
    double t = 0.0; ///< flight length
};

/// The unit-side equilateral table with counterclockwise vertices
/// V0=(0,0), V1=(1,0), V2=(1/2, sqrt(3)/2). Side i runs from V_i to V_{i+1}
/// and owns arc lengths [i, i+1).
class TableGeometry {
public:
    TableGeometry();

    const std::array<Vec2, 3>& vertices() const { return vertices_; }
    Vec2 vertex(int i) const { return vertices_[static_cast<std::size_t>(wrap(i))]; }

    double side_length(int i) const;

    /// Unit tangent of side i (direction of increasing arc length).
    Vec2 tangent(int i) const;
    /// Unit normal of side i pointing into the table.
    Vec2 inward_normal(int i) const;

    /// Cartesian point at arc length s (any real, taken mod 3).
    Vec2 point_at(double s) const;

    /// Unit direction leaving side i at angle theta from the inward normal,
    /// positive theta leaning toward increasing arc length.
    Vec2 direction(int side, double theta) const;

    /// Signed angle of a direction relative to the inward normal of side i.
    double angle_on_side(int side, Vec2 dir) const;

    /// Intersection of the ray origin + t*dir (t > 0) with the closed side i.
    std::optional<RayHit> cast_to_side(Vec2 origin, Vec2 dir, int side) const;

    static constexpr int wrap(int i) { return ((i % 3) + 3) % 3; }

private:
    std::array<Vec2, 3> vertices_;
};

/// Shared immutable table instance.
const TableGeometry& table();

} // namespace pinball
