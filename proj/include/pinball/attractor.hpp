#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pinball/billiard.hpp"
#include "pinball/raster.hpp"

namespace pinball {

inline constexpr std::size_t kDefaultTransient = 10000;
inline constexpr std::size_t kDefaultKeep = 100000;
inline constexpr int kDefaultEscapeN = 30;

struct AttractorSample {
    double lambda = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_transient = 0;
    std::size_t n_keep = 0;
    std::vector<PhasePoint> points;
    std::size_t restarts = 0; ///< initial conditions abandoned at a vertex
};

/// Long orbit from a uniform random start in (0,3) x (-pi/2, pi/2). A vertex
/// hit throws the orbit away and starts over, transient included.
AttractorSample sample_attractor(double lambda, std::uint64_t seed, std::size_t n_transient = kDefaultTransient,
                                 std::size_t n_keep = kDefaultKeep);

/// n_seeds independent samples; sample j draws from stream (seed, j).
std::vector<AttractorSample> sample_attractors(double lambda, std::uint64_t seed, std::size_t n_seeds,
                                               std::size_t n_transient = kDefaultTransient,
                                               std::size_t n_keep = kDefaultKeep);

/// Same draws as sample_attractors(...)[j] without producing the others.
AttractorSample sample_attractor_stream(double lambda, std::uint64_t seed, std::size_t index,
                                        std::size_t n_transient, std::size_t n_keep);

/// Regions of a side that T cannot reach after one or two bounces.
struct InaccessibleBoundary {
    double lambda = 0.0;
    double alpha = 0.0; ///< (pi/6)(2 lambda - 3 lambda^2)
    double strip = 0.0; ///< lambda pi/2

    /// Landing arc length (on side 1) of the ray leaving vertex 0 at angle t.
    static double ell(double t);
    /// Boundary curve gamma(t) = (ell(t), phi_+1(t)).
    PhasePoint gamma(double t) const;
    /// Forbidden set, reduced to one side by rotation and to theta >= 0 by
    /// the reflection (u, theta) -> (1 - u, -theta).
    bool contains(const PhasePoint& p) const;
};

InaccessibleBoundary inaccessible_boundary(double lambda);

/// Count of consecutive bounces with the target sign, capped at n, from each
/// cell center. A vertex hit keeps the count reached so far.
RasterGrid escape_time_raster(double lambda, const GridSpec& grid, int n = kDefaultEscapeN, int target_sign = +1);

struct ManifoldSegment {
    int side = 0;
    double u0 = 0.0; ///< local position of one end
    double u1 = 0.0; ///< local position of the other end, u0 <= u1
    double theta = 0.0;
    bool primary = true; ///< only right bounces since the seed segment

    double length() const { return u1 - u0; }
};

/// Union of horizontal segments approximating the unstable manifold of the
/// right-bouncing period-3 orbit after a number of generations.
struct ManifoldCurve {
    double lambda = 0.0;
    int generations = 0;
    std::vector<ManifoldSegment> segments;
    bool truncated = false; ///< segment cap reached
};

inline constexpr double kManifoldSeedHalfWidth = 1e-4;
inline constexpr std::size_t kManifoldSegmentCap = 1u << 20;

/// Each generation applies T to every segment, splitting it where it crosses
/// the discontinuity curve. Pieces shorter than the vertex tolerance are
/// dropped. Pieces are sampled only at their ends since T is affine along a
/// horizontal segment; samples_per_segment > 2 only affects polyline output.
ManifoldCurve unstable_manifold(double lambda, int generations);

/// Seed segment of half-width kManifoldSeedHalfWidth through (s3, theta*).
ManifoldCurve manifold_seed(double lambda);

/// One more generation; sets `truncated` instead when the cap is exceeded.
void advance_manifold(ManifoldCurve& curve, std::size_t cap = kManifoldSegmentCap);

/// Points of the curve, samples_per_segment per segment (at least 2).
std::vector<PhasePoint> manifold_polyline(const ManifoldCurve& curve, int samples_per_segment);

struct HomoclinicResult {
    bool homoclinic = false;
    int generation = 0; ///< generation of the witness, or the last one tested
    std::optional<GridSpec::Cell> witness;
    PhasePoint witness_point{0.0, 0.0}; ///< point of the crossing segment inside the witness cell
    RasterGrid escape;
    ManifoldCurve manifold;
};

/// Generations written by the manifolds command.
inline constexpr int kDefaultGenerations = 60;
/// Generation budget of the homoclinic search. The seed needs about
/// log(1e4)/log(mu_3) periods just to reach side length, which is over a
/// hundred steps when mu_3 is close to 1.
inline constexpr int kHomoclinicGenerations = 400;
inline constexpr std::size_t kHomoclinicSegmentCap = 1u << 19;

/// Escape raster over side 0, theta >= 0, against the unstable curve with
/// every segment rotated onto side 0, tested after every generation. Segments
/// that never left the right-bouncing branch are ignored: they meet the
/// stable set only at the periodic point itself. The search stops at the
/// first witness, at max_generations, or when the segment cap is hit; the
/// returned manifold is the last generation tested.
HomoclinicResult homoclinic_test(double lambda, int n = kDefaultEscapeN,
                                 const GridSpec& grid = GridSpec::side0_upper(800, 800),
                                 int max_generations = kHomoclinicGenerations);

struct ComponentReport {
    int count = 0;
    std::vector<int> labels;                 ///< component (1-based) of each seed
    std::vector<std::vector<PhasePoint>> clouds; ///< merged points per component
    struct Support {
        double theta_min = 0.0;
        double theta_max = 0.0;
        double s_min = 0.0;
        double s_max = 0.0;
    };
    std::vector<Support> supports;
    std::size_t restarts = 0;
};

inline constexpr int kComponentGrid = 400;
inline constexpr int kComponentDilation = 2;
inline constexpr double kComponentOverlap = 0.9;

/// Merge seeds whose clouds overlap: each has >= 90% of its points within
/// 2 cells of the other's occupied cells on a 400 x 400 full-space raster.
ComponentReport transitive_components(double lambda, std::size_t n_seeds = 12, std::size_t n_keep = 50000,
                                      std::uint64_t seed = 1, std::size_t n_transient = kDefaultTransient);

/// Fraction of points of `a` lying within `dilation` cells of an occupied cell of `b`.
double cloud_overlap(const std::vector<PhasePoint>& a, const std::vector<PhasePoint>& b, const GridSpec& grid,
                     int dilation);

/// Cell-by-cell label map: each cell gets the id of the nearest occupied
/// cell (breadth-first, ties to the lower id).
RasterGrid component_label_map(const ComponentReport& components, const GridSpec& grid);

/// Component id (1..count) reached by each cell center after `horizon`
/// steps; 0 when the orbit hits a vertex.
RasterGrid basin_raster(double lambda, const GridSpec& grid, int horizon, const ComponentReport& components);

/// Least-squares slope of log N(b) against log(1/b) for the cells of `r`
/// that differ from a 4-neighbour, box sizes 1, 2, 4, 8 cells.
double box_counting_slope(const RasterGrid& r);

struct MeasureStats {
    double lambda = 0.0;
    std::size_t n = 0;
    double sign_freq_plus = 0.0;
    double side_freq[3] = {0.0, 0.0, 0.0};
    struct Band {
        double theta_lo = 0.0;
        double theta_hi = 0.0;
        std::size_t count = 0;
        std::vector<std::size_t> s_histogram; ///< 64 bins over (0,3)
    };
    std::vector<Band> bands; ///< most visited first, at most 4
    std::size_t restarts = 0;
};

inline constexpr int kBandBins = 1024;
inline constexpr std::size_t kBandFloor = 10;
inline constexpr int kLineBins = 64;

/// Birkhoff averages along one orbit of n steps (after the default
/// transient). Requires lambda < 1/3.
MeasureStats measure_stats(double lambda, std::size_t n, std::uint64_t seed);

/// theta-intervals [lo, hi) made of runs of histogram bins holding at least
/// `floor` points (1024 bins over (-pi/2, pi/2)).
struct BandInterval {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};
std::vector<BandInterval> angle_bands(const std::vector<PhasePoint>& points, std::size_t floor = kBandFloor);

struct ScanRow {
    double lambda = 0.0;
    int components = 0;
    bool homoclinic = false;
    int bands = 0;
    double alpha = 0.0;
    bool gap_covered = false; ///< alpha < lambda pi/6
};

struct ScanOptions {
    std::uint64_t seed = 1;
    std::size_t n_seeds = 12;
    std::size_t n_transient = kDefaultTransient;
    std::size_t n_keep = 50000;   ///< per seed, for the component count
    std::size_t band_keep = 100000;
    int escape_n = kDefaultEscapeN;
    GridSpec escape_grid = GridSpec::side0_upper(800, 800);
    int generations = kHomoclinicGenerations;
};

/// lambda values lo, lo + step, ..., up to hi (inclusive within step/1e6).
std::vector<double> lambda_grid(double lo, double hi, double step);

std::vector<ScanRow> lambda_scan(const std::vector<double>& lambdas, const ScanOptions& options);

} // namespace pinball
