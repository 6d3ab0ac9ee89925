#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pinball/billiard.hpp"
#include "pinball/word.hpp"

namespace pinball {

/// Affine angle update lambda * (sign*pi/3 - theta) of a right (+1) or
/// left (-1) bounce.
double phi(BounceSign sign, double theta, double lambda);

/// Truncation (z_1, ..., z_d) of a point of the signed geometric series
/// (pi/3) * sum z_n lambda^n.
struct SignSeries {
    std::vector<int> signs; ///< entries +1 / -1
    double lambda = 0.0;

    std::size_t depth() const { return signs.size(); }
};

struct SeriesValue {
    double value = 0.0; ///< partial sum
    double tail = 0.0;  ///< bound on the distance to any completion
};

SeriesValue eval_series(const SignSeries& z);

/// Radius (pi/3) lambda^(d+1) / (1 - lambda) of the completions of a depth-d prefix.
double tail_radius(double lambda, std::size_t depth);

/// Largest element (pi/3) lambda / (1 - lambda) of C(lambda).
double cantor_sup(double lambda);

/// Default acceptance slack of decode_angle on top of the tail radius.
inline constexpr double kDecodeTolerance = 1e-12;

/// Greedy inverse of eval_series for lambda < 1/2 (the coding is unique
/// there). Throws OutOfCantorRange when theta leaves every admissible
/// bracket, DomainError for lambda >= 1/2.
SignSeries decode_angle(double theta, double lambda, std::size_t depth,
                        double tolerance = kDecodeTolerance);

/// Open interval (center - half_width, center + half_width) free of C(lambda).
struct GapInterval {
    double center = 0.0;
    double half_width = 0.0;
    int level = 0;

    double lo() const { return center - half_width; }
    double hi() const { return center + half_width; }
};

/// Half-width (pi/3) (1 - 2 lambda) / (1 - lambda) lambda^m of a level-m gap.
double gap_half_width(double lambda, int level);

/// All gaps of levels 1..max_level: one per partial sum of length m-1.
/// Requires lambda <= 1/2.
std::vector<GapInterval> gaps(double lambda, int max_level);

/// Angle of the periodic orbit with itinerary (w, w, w, ...).
/// Throws WordTooShort when |w| < 3.
double periodic_angle(const ItineraryWord& w, double lambda);

/// One of the two rotationally symmetric period-3 orbits.
struct Period3Orbit {
    double theta_star = 0.0; ///< fixed angle of the orbit (negative for the mirror)
    double s3 = 0.0;         ///< arc length of the orbit point on side 0
    int orientation = +1;    ///< +1 right bounces, -1 left bounces

    PhasePoint point() const { return {s3, theta_star}; }
};

/// Fixed angle (pi/3) lambda / (lambda + 1) of phi(+1, ., lambda).
double theta_star(double lambda);

/// Arc length 2 / (sqrt(3) tan(theta*) + 3) of the right-bouncing orbit on side 0.
double s3(double lambda);

/// Both orientations: [0] right-bouncing, [1] its mirror image.
std::array<Period3Orbit, 2> period3(double lambda);

/// Tolerance on |T^n(p) - p| accepted as a closed cycle.
inline constexpr double kClosureTolerance = 1e-8;

/// Unstable multiplier prod cos(lambda eta_i) / cos(eta_i) of a closed
/// cycle. Throws NotClosed when the record does not return to its start.
double expansion_factor(const OrbitRecord& orbit, double lambda);

} // namespace pinball
