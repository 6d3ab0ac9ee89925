#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "pinball/geometry.hpp"

namespace pinball {

/// Post-collision state: arc length s in (0,3) and outgoing angle theta in
/// (-pi/2, pi/2) measured from the inward normal, positive toward
/// increasing arc length.
struct PhasePoint {
    double s = 0.0;
    double theta = 0.0;

    int side() const;
    /// Arc-length position within the current side, in (0,1).
    double local() const;

    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Throws DomainError unless p lies in the open phase space (vertices excluded).
void validate(const PhasePoint& p);
bool is_valid(const PhasePoint& p) noexcept;

/// Throws DomainError unless lambda is in (0,1].
void validate_lambda(double lambda);

/// Bounce direction: +1 is a right bounce onto side i+1, -1 a left bounce
/// onto side i-1.
enum class BounceSign : int { Left = -1, Right = +1 };

constexpr int value(BounceSign z) { return static_cast<int>(z); }
constexpr BounceSign flip(BounceSign z) { return z == BounceSign::Right ? BounceSign::Left : BounceSign::Right; }
BounceSign to_sign(int z);

struct Step {
    PhasePoint next;
    BounceSign sign = BounceSign::Right;
    double flight = 0.0;   ///< chord length t0
    double incoming = 0.0; ///< eta at the next collision; next.theta = -lambda * eta
};

/// The ray passes within kVertexEps of a vertex.
struct VertexHit {
    double landing = 0.0; ///< arc length of the vertex-adjacent landing point
};

using StepOutcome = std::variant<Step, VertexHit>;

/// Discontinuity curve: angle at which the ray from s aims at the opposite vertex.
double delta(double s);

/// One application of the pinball map T_lambda.
StepOutcome step(const PhasePoint& p, double lambda);

/// Like step(), but forces the bounce toward side i+sign and does not
/// reject vertex landings. Used for continuous extensions of the map to the
/// closed cells of the Markov partition. Returns the landing arc length in
/// [j, j+1] for the target side j.
Step extended_step(const PhasePoint& p, BounceSign sign, double lambda);

/// Same continuous extension, in side-local coordinates so that both closed
/// ends u = 0 and u = 1 of a side stay addressable.
struct SideLanding {
    int side = 0;
    double u = 0.0; ///< in [0,1]
    double theta = 0.0;
};
SideLanding extended_landing(int side, double u, double theta, BounceSign sign, double lambda);

/// D T_lambda = -[[A, B], [0, lambda]], A = cos(theta0)/cos(eta1),
/// B = t0/cos(eta1).
struct JacobianStep {
    double a = 0.0; ///< ds1/ds0
    double b = 0.0; ///< ds1/dtheta0
    double c = 0.0; ///< dtheta1/ds0 (identically zero)
    double d = 0.0; ///< dtheta1/dtheta0

    double determinant() const { return a * d - b * c; }
};

JacobianStep jacobian_step(const PhasePoint& p, const Step& outcome, double lambda);

/// Matrix product lhs * rhs (rhs applied first).
JacobianStep compose(const JacobianStep& lhs, const JacobianStep& rhs);

enum class Termination { Completed, VertexHit };

struct OrbitRecord {
    PhasePoint start;
    std::vector<PhasePoint> points; ///< points[k] = T^{k+1}(start)
    std::vector<BounceSign> signs;
    std::vector<double> flights;
    std::vector<double> incoming;
    Termination termination = Termination::Completed;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    const PhasePoint& back() const { return points.empty() ? start : points.back(); }
};

OrbitRecord iterate(const PhasePoint& p, double lambda, std::size_t n);

/// Product of the step Jacobians along a recorded orbit.
JacobianStep orbit_jacobian(const OrbitRecord& orbit, double lambda);

} // namespace pinball
