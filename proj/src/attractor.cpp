#include "pinball/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "pinball/angular.hpp"
#include "pinball/errors.hpp"
#include "pinball/parallel.hpp"
#include "pinball/rng.hpp"
#include "pinball/symbolic.hpp"

namespace pinball {

namespace {

void require_open_lambda(double lambda, const char* who) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw DomainError(std::string(who) + ": lambda must lie in (0,1), got " + std::to_string(lambda));
    }
}

PhasePoint random_point(RandomStream& rng) {
    PhasePoint p{0.0, 0.0};
    do {
        p = {rng.uniform(0.0, 3.0), rng.uniform(-0.5 * kPi, 0.5 * kPi)};
    } while (!is_valid(p));
    return p;
}

// Drives one orbit with restarts. visit(step) sees every post-transient step.
template <class Visit>
std::size_t run_orbit(double lambda, RandomStream& rng, std::size_t n_transient, std::size_t n_keep,
                      Visit&& visit) {
    std::size_t restarts = 0;
    std::size_t kept = 0;
    PhasePoint cur = random_point(rng);
    std::size_t age = 0;
    while (kept < n_keep) {
        const StepOutcome out = step(cur, lambda);
        const Step* s = std::get_if<Step>(&out);
        if (s == nullptr) {
            ++restarts;
            cur = random_point(rng);
            age = 0;
            continue;
        }
        cur = s->next;
        if (++age >= n_transient) {
            visit(*s);
            ++kept;
        }
    }
    return restarts;
}

} // namespace

AttractorSample sample_attractor_stream(double lambda, std::uint64_t seed, std::size_t index,
                                        std::size_t n_transient, std::size_t n_keep) {
    require_open_lambda(lambda, "sample_attractor");
    AttractorSample out;
    out.lambda = lambda;
    out.seed = seed;
    out.n_transient = n_transient;
    out.n_keep = n_keep;
    out.points.reserve(n_keep);
    RandomStream rng = RandomStream::derive(seed, index);
    out.restarts = run_orbit(lambda, rng, n_transient, n_keep, [&](const Step& s) { out.points.push_back(s.next); });
    return out;
}

AttractorSample sample_attractor(double lambda, std::uint64_t seed, std::size_t n_transient, std::size_t n_keep) {
    return sample_attractor_stream(lambda, seed, 0, n_transient, n_keep);
}

std::vector<AttractorSample> sample_attractors(double lambda, std::uint64_t seed, std::size_t n_seeds,
                                               std::size_t n_transient, std::size_t n_keep) {
    require_open_lambda(lambda, "sample_attractors");
    std::vector<AttractorSample> out(n_seeds);
    parallel_for(n_seeds, [&](std::size_t j) { out[j] = sample_attractor_stream(lambda, seed, j, n_transient, n_keep); });
    return out;
}

// ---------------------------------------------------------------------------

double InaccessibleBoundary::ell(double t) { return 1.0 + 2.0 / (1.0 + kSqrt3 * std::tan(t)); }

PhasePoint InaccessibleBoundary::gamma(double t) const { return {ell(t), phi(BounceSign::Right, t, lambda)}; }

bool InaccessibleBoundary::contains(const PhasePoint& p) const {
    double u = p.s - std::floor(p.s);
    double theta = p.theta;
    if (theta < 0.0) {
        u = 1.0 - u;
        theta = -theta;
    }
    if (theta >= strip) return true;
    const double inner = lambda * kPi / 6.0;
    if (theta >= inner) return false;
    if (lambda <= 1.0 / 3.0) return true; // the whole central gap
    if (alpha <= 0.0) return false;       // images overlap, nothing left to exclude
    if (theta <= alpha) return true;
    // theta in (alpha, lambda pi/6) is reached only from angles t in
    // (pi/6, lambda pi/2), and only to the left of gamma.
    const double t = kPi / 3.0 - theta / lambda;
    return u > ell(t) - 1.0;
}

InaccessibleBoundary inaccessible_boundary(double lambda) {
    require_open_lambda(lambda, "inaccessible_boundary");
    InaccessibleBoundary b;
    b.lambda = lambda;
    b.alpha = (kPi / 6.0) * (2.0 * lambda - 3.0 * lambda * lambda);
    b.strip = lambda * kPi / 2.0;
    return b;
}

// ---------------------------------------------------------------------------

RasterGrid escape_time_raster(double lambda, const GridSpec& grid, int n, int target_sign) {
    require_open_lambda(lambda, "escape_time_raster");
    if (n < 1) throw DomainError("escape_time_raster: n must be at least 1");
    const BounceSign target = to_sign(target_sign);
    RasterGrid r(grid);
    parallel_for(static_cast<std::size_t>(grid.height), [&](std::size_t row) {
        for (int col = 0; col < grid.width; ++col) {
            PhasePoint cur = grid.center(static_cast<int>(row), col);
            std::uint32_t count = 0;
            if (is_valid(cur)) {
                while (count < static_cast<std::uint32_t>(n)) {
                    const StepOutcome out = step(cur, lambda);
                    const Step* s = std::get_if<Step>(&out);
                    if (s == nullptr || s->sign != target) break;
                    ++count;
                    cur = s->next;
                }
            }
            r.at(static_cast<int>(row), col) = count;
        }
    });
    return r;
}

// ---------------------------------------------------------------------------

ManifoldCurve manifold_seed(double lambda) {
    require_open_lambda(lambda, "unstable_manifold");
    const Period3Orbit orbit = period3(lambda)[0];
    ManifoldCurve curve;
    curve.lambda = lambda;
    curve.segments.push_back(
        {0, orbit.s3 - kManifoldSeedHalfWidth, orbit.s3 + kManifoldSeedHalfWidth, orbit.theta_star, true});
    return curve;
}

void advance_manifold(ManifoldCurve& curve, std::size_t cap) {
    if (curve.truncated) return;
    const double lambda = curve.lambda;
    std::vector<ManifoldSegment> next;
    next.reserve(curve.segments.size() * 2);
    for (const ManifoldSegment& seg : curve.segments) {
        const double d = markov_split(seg.theta);
        // T is affine along a horizontal segment, so the ends suffice.
        auto push = [&](double a, double b, BounceSign sign) {
            if (!(b - a > kVertexEps)) return;
            const SideLanding la = extended_landing(seg.side, a, seg.theta, sign, lambda);
            const SideLanding lb = extended_landing(seg.side, b, seg.theta, sign, lambda);
            ManifoldSegment out;
            out.side = la.side;
            out.u0 = std::min(la.u, lb.u);
            out.u1 = std::max(la.u, lb.u);
            out.theta = la.theta;
            out.primary = seg.primary && sign == BounceSign::Right;
            if (out.length() > kVertexEps) next.push_back(out);
        };
        push(seg.u0, std::min(seg.u1, d), BounceSign::Left);
        push(std::max(seg.u0, d), seg.u1, BounceSign::Right);
    }
    if (next.size() > cap) {
        curve.truncated = true;
        return;
    }
    curve.segments = std::move(next);
    ++curve.generations;
}

ManifoldCurve unstable_manifold(double lambda, int generations) {
    if (generations < 0) throw DomainError("unstable_manifold: generations must be >= 0");
    ManifoldCurve curve = manifold_seed(lambda);
    while (curve.generations < generations && !curve.truncated) advance_manifold(curve);
    return curve;
}

std::vector<PhasePoint> manifold_polyline(const ManifoldCurve& curve, int samples_per_segment) {
    const int k = std::max(2, samples_per_segment);
    std::vector<PhasePoint> out;
    out.reserve(curve.segments.size() * k);
    for (const ManifoldSegment& seg : curve.segments) {
        for (int j = 0; j < k; ++j) {
            const double u = seg.u0 + (seg.u1 - seg.u0) * j / (k - 1);
            out.push_back({seg.side + u, seg.theta});
        }
    }
    return out;
}

HomoclinicResult homoclinic_test(double lambda, int n, const GridSpec& grid, int max_generations) {
    HomoclinicResult res;
    res.escape = escape_time_raster(lambda, grid, n, +1);
    const auto saturated = static_cast<std::uint32_t>(n);
    // Per-row prefix counts of saturated cells: any hit in a column range is O(1).
    const auto stride = static_cast<std::size_t>(grid.width) + 1;
    std::vector<std::uint32_t> prefix(stride * grid.height, 0);
    for (int r = 0; r < grid.height; ++r) {
        for (int c = 0; c < grid.width; ++c) {
            prefix[r * stride + c + 1] = prefix[r * stride + c] + (res.escape.at(r, c) == saturated ? 1 : 0);
        }
    }

    res.manifold = manifold_seed(lambda);
    while (true) {
        for (const ManifoldSegment& seg : res.manifold.segments) {
            if (seg.primary) continue;
            const auto cell = grid.locate(grid.s_min + 0.5 * grid.ds(), seg.theta);
            if (!cell) continue;
            const int c0 = std::max(0, static_cast<int>(std::floor((seg.u0 - grid.s_min) / grid.ds())));
            const int c1 =
                std::min(grid.width - 1, static_cast<int>(std::floor((seg.u1 - grid.s_min) / grid.ds())));
            if (c0 > c1) continue;
            const std::uint32_t* row = &prefix[cell->row * stride];
            if (row[c1 + 1] == row[c0]) continue;
            for (int c = c0; c <= c1; ++c) {
                if (res.escape.at(cell->row, c) != saturated) continue;
                res.homoclinic = true;
                res.witness = GridSpec::Cell{cell->row, c};
                const double mid = grid.s_min + (c + 0.5) * grid.ds();
                res.witness_point = {std::clamp(mid, seg.u0, seg.u1), seg.theta};
                res.generation = res.manifold.generations;
                return res;
            }
        }
        res.generation = res.manifold.generations;
        if (res.manifold.generations >= max_generations) break;
        advance_manifold(res.manifold, kHomoclinicSegmentCap);
        if (res.manifold.truncated) break;
    }
    return res;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint8_t> occupancy(const std::vector<PhasePoint>& pts, const GridSpec& grid) {
    std::vector<std::uint8_t> occ(grid.cells(), 0);
    for (const PhasePoint& p : pts) {
        if (auto c = grid.locate(p)) occ[static_cast<std::size_t>(c->row) * grid.width + c->col] = 1;
    }
    return occ;
}

std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& occ, const GridSpec& grid, int radius) {
    std::vector<std::uint8_t> out(occ.size(), 0);
    const int w = grid.width;
    const int h = grid.height;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!occ[static_cast<std::size_t>(r) * w + c]) continue;
            for (int dr = -radius; dr <= radius; ++dr) {
                const int rr = r + dr;
                if (rr < 0 || rr >= h) continue;
                for (int dc = -radius; dc <= radius; ++dc) {
                    const int cc = c + dc;
                    if (cc < 0 || cc >= w) continue;
                    out[static_cast<std::size_t>(rr) * w + cc] = 1;
                }
            }
        }
    }
    return out;
}

double fraction_inside(const std::vector<PhasePoint>& pts, const std::vector<std::uint8_t>& mask,
                       const GridSpec& grid) {
    if (pts.empty()) return 0.0;
    std::size_t hit = 0;
    for (const PhasePoint& p : pts) {
        if (auto c = grid.locate(p)) hit += mask[static_cast<std::size_t>(c->row) * grid.width + c->col];
    }
    return static_cast<double>(hit) / static_cast<double>(pts.size());
}

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

double cloud_overlap(const std::vector<PhasePoint>& a, const std::vector<PhasePoint>& b, const GridSpec& grid,
                     int dilation) {
    return fraction_inside(a, dilate(occupancy(b, grid), grid, dilation), grid);
}

ComponentReport transitive_components(double lambda, std::size_t n_seeds, std::size_t n_keep, std::uint64_t seed,
                                      std::size_t n_transient) {
    require_open_lambda(lambda, "transitive_components");
    if (n_seeds < 1 || n_keep < 1) throw DomainError("transitive_components: need at least one seed and one point");
    const std::vector<AttractorSample> samples = sample_attractors(lambda, seed, n_seeds, n_transient, n_keep);
    const GridSpec grid = GridSpec::full(kComponentGrid, kComponentGrid);

    std::vector<std::vector<std::uint8_t>> masks(n_seeds);
    parallel_for(n_seeds, [&](std::size_t j) {
        masks[j] = dilate(occupancy(samples[j].points, grid), grid, kComponentDilation);
    });

    DisjointSets sets(n_seeds);
    for (std::size_t a = 0; a < n_seeds; ++a) {
        for (std::size_t b = a + 1; b < n_seeds; ++b) {
            if (sets.find(a) == sets.find(b)) continue;
            if (fraction_inside(samples[a].points, masks[b], grid) >= kComponentOverlap &&
                fraction_inside(samples[b].points, masks[a], grid) >= kComponentOverlap) {
                sets.unite(a, b);
            }
        }
    }

    ComponentReport rep;
    rep.labels.assign(n_seeds, 0);
    std::vector<int> id_of_root(n_seeds, 0);
    for (std::size_t j = 0; j < n_seeds; ++j) {
        const std::size_t root = sets.find(j);
        if (id_of_root[root] == 0) {
            id_of_root[root] = ++rep.count;
            rep.clouds.emplace_back();
        }
        const int id = id_of_root[root];
        rep.labels[j] = id;
        auto& cloud = rep.clouds[static_cast<std::size_t>(id - 1)];
        cloud.insert(cloud.end(), samples[j].points.begin(), samples[j].points.end());
        rep.restarts += samples[j].restarts;
    }
    for (const auto& cloud : rep.clouds) {
        ComponentReport::Support sup{cloud.front().theta, cloud.front().theta, cloud.front().s, cloud.front().s};
        for (const PhasePoint& p : cloud) {
            sup.theta_min = std::min(sup.theta_min, p.theta);
            sup.theta_max = std::max(sup.theta_max, p.theta);
            sup.s_min = std::min(sup.s_min, p.s);
            sup.s_max = std::max(sup.s_max, p.s);
        }
        rep.supports.push_back(sup);
    }
    return rep;
}

RasterGrid component_label_map(const ComponentReport& components, const GridSpec& grid) {
    RasterGrid labels(grid);
    std::deque<std::size_t> queue;
    for (std::size_t k = 0; k < components.clouds.size(); ++k) {
        const auto id = static_cast<std::uint32_t>(k + 1);
        for (const PhasePoint& p : components.clouds[k]) {
            auto c = grid.locate(p);
            if (!c) continue;
            std::uint32_t& v = labels.at(c->row, c->col);
            if (v == 0) {
                v = id;
                queue.push_back(static_cast<std::size_t>(c->row) * grid.width + c->col);
            }
        }
    }
    // Breadth-first growth; the queue starts ordered by id, so ties go low.
    while (!queue.empty()) {
        const std::size_t idx = queue.front();
        queue.pop_front();
        const int r = static_cast<int>(idx / grid.width);
        const int c = static_cast<int>(idx % grid.width);
        const std::uint32_t id = labels.values[idx];
        const int nr[4] = {r - 1, r + 1, r, r};
        const int nc[4] = {c, c, c - 1, c + 1};
        for (int k = 0; k < 4; ++k) {
            if (nr[k] < 0 || nr[k] >= grid.height || nc[k] < 0 || nc[k] >= grid.width) continue;
            std::uint32_t& v = labels.at(nr[k], nc[k]);
            if (v == 0) {
                v = id;
                queue.push_back(static_cast<std::size_t>(nr[k]) * grid.width + nc[k]);
            }
        }
    }
    return labels;
}

RasterGrid basin_raster(double lambda, const GridSpec& grid, int horizon, const ComponentReport& components) {
    require_open_lambda(lambda, "basin_raster");
    if (components.count < 2) {
        throw DomainError("basin_raster: single transitive component at lambda " + std::to_string(lambda));
    }
    if (horizon < 1) throw DomainError("basin_raster: horizon must be at least 1");
    const RasterGrid labels = component_label_map(components, GridSpec::full(kComponentGrid, kComponentGrid));
    RasterGrid r(grid);
    parallel_for(static_cast<std::size_t>(grid.height), [&](std::size_t row) {
        for (int col = 0; col < grid.width; ++col) {
            PhasePoint cur = grid.center(static_cast<int>(row), col);
            std::uint32_t id = 0;
            if (is_valid(cur)) {
                bool hit = false;
                for (int k = 0; k < horizon; ++k) {
                    const StepOutcome out = step(cur, lambda);
                    const Step* s = std::get_if<Step>(&out);
                    if (s == nullptr) {
                        hit = true;
                        break;
                    }
                    cur = s->next;
                }
                if (!hit) {
                    if (auto c = labels.spec.locate(cur)) id = labels.at(c->row, c->col);
                }
            }
            r.at(static_cast<int>(row), col) = id;
        }
    });
    return r;
}

double box_counting_slope(const RasterGrid& r) {
    const int w = r.spec.width;
    const int h = r.spec.height;
    std::vector<std::uint8_t> boundary(r.values.size(), 0);
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const std::uint32_t v = r.at(row, col);
            const bool edge = (row > 0 && r.at(row - 1, col) != v) || (row + 1 < h && r.at(row + 1, col) != v) ||
                              (col > 0 && r.at(row, col - 1) != v) || (col + 1 < w && r.at(row, col + 1) != v);
            boundary[static_cast<std::size_t>(row) * w + col] = edge ? 1 : 0;
        }
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (int b : {1, 2, 4, 8}) {
        const int bw = (w + b - 1) / b;
        const int bh = (h + b - 1) / b;
        std::vector<std::uint8_t> boxes(static_cast<std::size_t>(bw) * bh, 0);
        for (int row = 0; row < h; ++row) {
            for (int col = 0; col < w; ++col) {
                if (boundary[static_cast<std::size_t>(row) * w + col]) {
                    boxes[static_cast<std::size_t>(row / b) * bw + col / b] = 1;
                }
            }
        }
        const auto count = std::count(boxes.begin(), boxes.end(), std::uint8_t{1});
        if (count == 0) return 0.0;
        xs.push_back(std::log(1.0 / b));
        ys.push_back(std::log(static_cast<double>(count)));
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    return sxy / sxx;
}

// ---------------------------------------------------------------------------

std::vector<BandInterval> angle_bands(const std::vector<PhasePoint>& points, std::size_t floor) {
    std::vector<std::size_t> hist(kBandBins, 0);
    const double width = kPi / kBandBins;
    for (const PhasePoint& p : points) {
        const int bin = std::clamp(static_cast<int>(std::floor((p.theta + 0.5 * kPi) / width)), 0, kBandBins - 1);
        ++hist[static_cast<std::size_t>(bin)];
    }
    std::vector<BandInterval> bands;
    int k = 0;
    while (k < kBandBins) {
        if (hist[static_cast<std::size_t>(k)] < floor) {
            ++k;
            continue;
        }
        BandInterval band;
        band.lo = -0.5 * kPi + k * width;
        while (k < kBandBins && hist[static_cast<std::size_t>(k)] >= floor) {
            band.count += hist[static_cast<std::size_t>(k)];
            ++k;
        }
        band.hi = -0.5 * kPi + k * width;
        bands.push_back(band);
    }
    return bands;
}

MeasureStats measure_stats(double lambda, std::size_t n, std::uint64_t seed) {
    if (!(lambda > 0.0 && lambda < 1.0 / 3.0)) {
        throw DomainError("measure_stats: requires 0 < lambda < 1/3, got " + std::to_string(lambda));
    }
    if (n < 1) throw DomainError("measure_stats: n must be at least 1");
    MeasureStats st;
    st.lambda = lambda;
    st.n = n;
    std::vector<PhasePoint> points;
    points.reserve(n);
    std::size_t plus = 0;
    std::size_t sides[3] = {0, 0, 0};
    RandomStream rng = RandomStream::derive(seed, 0);
    st.restarts = run_orbit(lambda, rng, kDefaultTransient, n, [&](const Step& s) {
        if (s.sign == BounceSign::Right) ++plus;
        ++sides[s.next.side()];
        points.push_back(s.next);
    });
    st.sign_freq_plus = static_cast<double>(plus) / n;
    for (int i = 0; i < 3; ++i) st.side_freq[i] = static_cast<double>(sides[i]) / n;

    std::vector<BandInterval> bands = angle_bands(points);
    std::stable_sort(bands.begin(), bands.end(),
                     [](const BandInterval& a, const BandInterval& b) { return a.count > b.count; });
    if (bands.size() > 4) bands.resize(4);
    for (const BandInterval& b : bands) {
        MeasureStats::Band band;
        band.theta_lo = b.lo;
        band.theta_hi = b.hi;
        band.s_histogram.assign(kLineBins, 0);
        for (const PhasePoint& p : points) {
            if (p.theta < b.lo || p.theta >= b.hi) continue;
            const int bin = std::clamp(static_cast<int>(p.s / 3.0 * kLineBins), 0, kLineBins - 1);
            ++band.s_histogram[static_cast<std::size_t>(bin)];
            ++band.count;
        }
        st.bands.push_back(std::move(band));
    }
    return st;
}

// ---------------------------------------------------------------------------

std::vector<double> lambda_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("lambda range is empty");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-6)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
}

std::vector<ScanRow> lambda_scan(const std::vector<double>& lambdas, const ScanOptions& options) {
    if (lambdas.empty()) throw DomainError("lambda_scan: empty range");
    for (double l : lambdas) require_open_lambda(l, "lambda_scan");
    std::vector<ScanRow> rows;
    rows.reserve(lambdas.size());
    for (double l : lambdas) {
        ScanRow row;
        row.lambda = l;
        row.components = transitive_components(l, options.n_seeds, options.n_keep, options.seed, options.n_transient).count;
        row.homoclinic = homoclinic_test(l, options.escape_n, options.escape_grid, options.generations).homoclinic;
        row.bands = static_cast<int>(
            angle_bands(sample_attractor(l, options.seed, options.n_transient, options.band_keep).points).size());
        const InaccessibleBoundary b = inaccessible_boundary(l);
        row.alpha = b.alpha;
        row.gap_covered = b.alpha < l * kPi / 6.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace pinball
