#pragma once

#include <cstddef>

#include "pinball/angular.hpp"
#include "pinball/billiard.hpp"
#include "pinball/word.hpp"

namespace pinball {

/// Finite-depth itinerary of a phase point. When the orbit hits a vertex at
/// step k the word holds the k-1 well-defined signs and vertex_hit is set.
struct Itinerary {
    ItineraryWord word;
    bool vertex_hit = false;
};

Itinerary itinerary(const PhasePoint& p, double lambda, std::size_t n);

enum class MarkovHalf { L, R };

/// Half of a full-side horizontal interval J(i, theta), |theta| < pi/6, cut
/// at the preimage d_theta of the opposite vertex. L = (i, d], R = [d, i+1).
struct MarkovCell {
    int side = 0;
    double theta = 0.0;
    MarkovHalf half = MarkovHalf::R;
    double lo = 0.0;    ///< arc length
    double hi = 0.0;    ///< arc length
    double split = 0.0; ///< d_theta, arc length

    double length() const { return hi - lo; }
    /// Constant derivative 1/|S| of the affine extension onto the target side.
    double expansion() const { return 1.0 / length(); }
    BounceSign sign() const { return half == MarkovHalf::R ? BounceSign::Right : BounceSign::Left; }
};

/// Local position in (0,1) of d_theta: the point of a side whose ray at
/// angle theta meets the opposite vertex. Requires |theta| < pi/2.
double markov_split(double theta);

/// Throws NotMarkovian when |theta| >= pi/6.
MarkovCell markov_cell(int side, double theta, MarkovHalf half);

/// Uniform horizontal expansion rho(lambda) > 1 of the Markov cells met by
/// angles |theta| <= lambda*pi/2 (lambda < 1/3).
double expansion_rate(double lambda);

/// Nested interval H_k of points of J(side, theta) whose first k bounces
/// follow w, together with the affine map that carries H_k onto the full
/// side reached after k bounces: local(start) = offset + scale * local(end).
struct Refinement {
    int side = 0;
    double lo = 0.0; ///< arc length of the left end of H_k
    double hi = 0.0; ///< arc length of the right end of H_k
    int end_side = 0;
    double end_theta = 0.0;
    double offset = 0.0;
    double scale = 1.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

/// Requires lambda < 1/3; throws NotMarkovian if an intermediate angle
/// leaves |theta| < pi/6.
Refinement refine(int side, double theta, const ItineraryWord& w, double lambda);

/// Symbolic coordinates (future itinerary w, angle code z, side i).
struct SymbolState {
    ItineraryWord w;
    SignSeries z;
    int side = 0;
};

/// Midpoint of H_|w| on J(side, E(z)); requires lambda < 1/3. The depths of w
/// and z may differ (tau lengthens z and shortens w).
PhasePoint point_from_code(const SymbolState& state, double lambda);

/// Shift model [(w, z), i] -> [(sigma w, (w1, -z1, -z2, ...)), i + w1].
/// Throws EmptyWord on an empty itinerary.
SymbolState tau(const SymbolState& state);

/// Angle after following w from theta0, by the closed-form series.
double angle_after(const ItineraryWord& w, double theta0, double lambda);

/// Length k of the reversed code prefix used by connecting_word:
/// the smallest k >= 1 with (pi/3) lambda^k / (1 - lambda) <= eps.
std::size_t connecting_depth(double eps, double lambda);

/// Word steering J(from_side, from_theta) onto side to_side at an angle
/// within eps of to_theta. Throws NotInCantor if either angle is not in C(lambda).
ItineraryWord connecting_word(int from_side, double from_theta, int to_side, double to_theta, double eps,
                              double lambda);

/// Point on side `side` whose itinerary repeats w forever (lambda < 1/3).
/// The orbit satisfies T^|w|(p) = p + displacement(w) in arc length mod 3.
/// Throws DomainError when the fixed point is a vertex, as for the powers of
/// (+1,-1) which would be period-2 orbits.
PhasePoint periodic_point(const ItineraryWord& w, double lambda, int side = 0);

/// Number of steps after which periodic_point(w) returns to itself:
/// |w| if the displacement is 0 mod 3, 3|w| otherwise.
std::size_t closing_period(const ItineraryWord& w);

} // namespace pinball
