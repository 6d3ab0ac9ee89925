#include "pinball/geometry.hpp"

namespace pinball {

TableGeometry::TableGeometry()
    : vertices_{Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.5, 0.5 * kSqrt3}} {}

double TableGeometry::side_length(int i) const {
    return norm(vertex(i + 1) - vertex(i));
}

Vec2 TableGeometry::tangent(int i) const {
    const Vec2 e = vertex(i + 1) - vertex(i);
    const double len = norm(e);
    return {e.x / len, e.y / len};
}

Vec2 TableGeometry::inward_normal(int i) const {
    // Counterclockwise boundary: the interior lies to the left of the tangent.
    const Vec2 t = tangent(i);
    return {-t.y, t.x};
}

Vec2 TableGeometry::point_at(double s) const {
    const double side = std::floor(s);
    const double u = s - side;
    const int i = wrap(static_cast<int>(side));
    return vertex(i) + u * (vertex(i + 1) - vertex(i));
}

Vec2 TableGeometry::direction(int side, double theta) const {
    return std::cos(theta) * inward_normal(side) + std::sin(theta) * tangent(side);
}

double TableGeometry::angle_on_side(int side, Vec2 dir) const {
    return std::atan2(dot(dir, tangent(side)), dot(dir, inward_normal(side)));
}

std::optional<RayHit> TableGeometry::cast_to_side(Vec2 origin, Vec2 dir, int side) const {
    const Vec2 a = vertex(side);
    const Vec2 e = vertex(side + 1) - a;
    const double denom = cross(dir, e);
    if (denom == 0.0) {
        return std::nullopt;
    }
    const Vec2 w = a - origin;
    const double t = cross(w, e) / denom;
    const double u = cross(w, dir) / denom;
    if (!(t > 0.0) || u < 0.0 || u > 1.0) {
        return std::nullopt;
    }
    return RayHit{u, t};
}

const TableGeometry& table() {
    static const TableGeometry instance;
    return instance;
}

} // namespace pinball
