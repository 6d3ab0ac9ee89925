#include "pinball/billiard.hpp"

#include <algorithm>
#include <string>

#include "pinball/errors.hpp"

namespace pinball {

int PhasePoint::side() const { return static_cast<int>(std::floor(s)); }

double PhasePoint::local() const { return s - std::floor(s); }

bool is_valid(const PhasePoint& p) noexcept {
    return std::isfinite(p.s) && std::isfinite(p.theta) && p.s > 0.0 && p.s < 3.0 &&
           p.s != std::floor(p.s) && std::abs(p.theta) < 0.5 * kPi;
}

void validate(const PhasePoint& p) {
    if (!is_valid(p)) {
        throw DomainError("phase point (" + std::to_string(p.s) + ", " + std::to_string(p.theta) +
                          ") outside (0,3)x(-pi/2,pi/2) or on a vertex");
    }
}

void validate_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw DomainError("lambda must lie in (0,1], got " + std::to_string(lambda));
    }
}

BounceSign to_sign(int z) {
    if (z == 1) return BounceSign::Right;
    if (z == -1) return BounceSign::Left;
    throw DomainError("bounce sign must be +1 or -1, got " + std::to_string(z));
}

double delta(double s) {
    if (!(s > 0.0 && s < 3.0) || s == std::floor(s)) {
        throw DomainError("delta: arc length must be in (0,3) and not a vertex, got " + std::to_string(s));
    }
    return std::atan((1.0 + 2.0 * (std::floor(s) - s)) / kSqrt3);
}

namespace {

// All collisions are computed in the frame of side 0 and relabelled by the
// rotational symmetry of the table: side i+1 is canonical side 1, side i-1 is
// canonical side 2.
constexpr int canonical_target(BounceSign z) { return z == BounceSign::Right ? 1 : 2; }

struct Collision {
    double u = 0.0;
    double t = 0.0;
    double elastic = 0.0; ///< elastic outgoing angle at the landing side
};

Collision collide(double u0, double theta, BounceSign z) {
    const TableGeometry& g = table();
    const int target = canonical_target(z);
    const Vec2 origin = g.point_at(u0);
    const Vec2 dir = g.direction(0, theta);

    const Vec2 a = g.vertex(target);
    const Vec2 e = g.vertex(target + 1) - a;
    const double denom = cross(dir, e);
    const Vec2 w = a - origin;
    Collision c;
    c.t = cross(w, e) / denom;
    c.u = cross(w, dir) / denom;

    const Vec2 n = g.inward_normal(target);
    const Vec2 reflected = dir - (2.0 * dot(dir, n)) * n;
    c.elastic = g.angle_on_side(target, reflected);
    return c;
}

} // namespace

StepOutcome step(const PhasePoint& p, double lambda) {
    validate(p);
    validate_lambda(lambda);

    const TableGeometry& g = table();
    const int side = p.side();
    const double u0 = p.local();

    const Vec2 origin = g.point_at(u0);
    const Vec2 dir = g.direction(0, p.theta);
    const double turn = cross(dir, g.vertex(2) - origin);
    if (turn == 0.0) {
        return VertexHit{static_cast<double>(TableGeometry::wrap(side + 2))};
    }
    const BounceSign z = turn > 0.0 ? BounceSign::Right : BounceSign::Left;
    const Collision c = collide(u0, p.theta, z);
    const int landing_side = TableGeometry::wrap(side + value(z));
    if (!(c.u > kVertexEps && c.u < 1.0 - kVertexEps)) {
        const double corner = c.u < 0.5 ? 0.0 : 1.0;
        return VertexHit{landing_side + corner};
    }

    Step out;
    out.next = PhasePoint{landing_side + c.u, lambda * c.elastic};
    out.sign = z;
    out.flight = c.t;
    out.incoming = -c.elastic;
    return out;
}

Step extended_step(const PhasePoint& p, BounceSign sign, double lambda) {
    const Collision c = collide(p.local(), p.theta, sign);
    const int landing_side = TableGeometry::wrap(p.side() + value(sign));
    Step out;
    out.next = PhasePoint{landing_side + std::clamp(c.u, 0.0, 1.0), lambda * c.elastic};
    out.sign = sign;
    out.flight = c.t;
    out.incoming = -c.elastic;
    return out;
}

SideLanding extended_landing(int side, double u, double theta, BounceSign sign, double lambda) {
    const Collision c = collide(u, theta, sign);
    return {TableGeometry::wrap(side + value(sign)), std::clamp(c.u, 0.0, 1.0), lambda * c.elastic};
}

JacobianStep jacobian_step(const PhasePoint& p, const Step& outcome, double lambda) {
    const double cos_eta = std::cos(outcome.incoming);
    JacobianStep j;
    j.a = -std::cos(p.theta) / cos_eta;
    j.b = -outcome.flight / cos_eta;
    j.c = 0.0;
    j.d = -lambda;
    return j;
}

JacobianStep compose(const JacobianStep& lhs, const JacobianStep& rhs) {
    JacobianStep m;
    m.a = lhs.a * rhs.a + lhs.b * rhs.c;
    m.b = lhs.a * rhs.b + lhs.b * rhs.d;
    m.c = lhs.c * rhs.a + lhs.d * rhs.c;
    m.d = lhs.c * rhs.b + lhs.d * rhs.d;
    return m;
}

OrbitRecord iterate(const PhasePoint& p, double lambda, std::size_t n) {
    validate(p);
    validate_lambda(lambda);
    OrbitRecord rec;
    rec.start = p;
    rec.points.reserve(n);
    rec.signs.reserve(n);
    rec.flights.reserve(n);
    rec.incoming.reserve(n);
    PhasePoint cur = p;
    for (std::size_t k = 0; k < n; ++k) {
        const StepOutcome out = step(cur, lambda);
        const Step* s = std::get_if<Step>(&out);
        if (s == nullptr) {
            rec.termination = Termination::VertexHit;
            break;
        }
        rec.points.push_back(s->next);
        rec.signs.push_back(s->sign);
        rec.flights.push_back(s->flight);
        rec.incoming.push_back(s->incoming);
        cur = s->next;
    }
    return rec;
}

JacobianStep orbit_jacobian(const OrbitRecord& orbit, double lambda) {
    JacobianStep acc{1.0, 0.0, 0.0, 1.0};
    PhasePoint from = orbit.start;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
        Step s{orbit.points[k], orbit.signs[k], orbit.flights[k], orbit.incoming[k]};
        acc = compose(jacobian_step(from, s, lambda), acc);
        from = orbit.points[k];
    }
    return acc;
}

} // namespace pinball
