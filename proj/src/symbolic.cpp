#include "pinball/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pinball/errors.hpp"

namespace pinball {

Itinerary itinerary(const PhasePoint& p, double lambda, std::size_t n) {
    if (n < 1) {
        throw DomainError("itinerary length must be at least 1");
    }
    const OrbitRecord orbit = iterate(p, lambda, n);
    Itinerary out;
    out.word = ItineraryWord(orbit.signs);
    out.vertex_hit = orbit.termination == Termination::VertexHit;
    return out;
}

double markov_split(double theta) {
    if (!(std::abs(theta) < 0.5 * kPi)) {
        throw DomainError("markov_split: |theta| must be < pi/2");
    }
    // Trace the ray through the apex backwards onto side 0.
    const TableGeometry& g = table();
    const Vec2 dir = g.direction(0, theta);
    const Vec2 apex = g.vertex(2);
    const Vec2 back{-dir.x, -dir.y};
    // Side 0 is the x axis: apex + t*back hits y = 0 at t = apex.y / dir.y.
    const double t = apex.y / dir.y;
    return (apex + t * back).x;
}

MarkovCell markov_cell(int side, double theta, MarkovHalf half) {
    if (!(std::abs(theta) < kPi / 6.0)) {
        throw NotMarkovian("markov_cell: |theta| = " + std::to_string(std::abs(theta)) + " is not < pi/6");
    }
    const int i = TableGeometry::wrap(side);
    const double d = markov_split(theta);
    MarkovCell c;
    c.side = i;
    c.theta = theta;
    c.half = half;
    c.split = i + d;
    c.lo = half == MarkovHalf::L ? i : i + d;
    c.hi = half == MarkovHalf::L ? i + d : i + 1.0;
    return c;
}

namespace {

void require_markov_lambda(double lambda, const char* who) {
    if (!(lambda > 0.0 && lambda < 1.0 / 3.0)) {
        throw DomainError(std::string(who) + ": requires 0 < lambda < 1/3, got " + std::to_string(lambda));
    }
}

} // namespace

double expansion_rate(double lambda) {
    require_markov_lambda(lambda, "expansion_rate");
    constexpr int kGrid = 10000;
    const double bound = lambda * kPi / 2.0;
    auto cell_expansion = [](double theta) {
        const double d = markov_split(theta);
        return 1.0 / std::max(d, 1.0 - d);
    };
    double rho = cell_expansion(bound * (1.0 + 1e-9));
    rho = std::min(rho, cell_expansion(-bound * (1.0 + 1e-9)));
    for (int k = 0; k <= kGrid; ++k) {
        const double theta = -bound + 2.0 * bound * k / kGrid;
        rho = std::min(rho, cell_expansion(theta));
    }
    return rho;
}

Refinement refine(int side, double theta, const ItineraryWord& w, double lambda) {
    require_markov_lambda(lambda, "refine");
    Refinement r;
    r.side = TableGeometry::wrap(side);
    double angle = theta;
    int current = r.side;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(std::abs(angle) < kPi / 6.0)) {
            throw NotMarkovian("refine: angle " + std::to_string(angle) + " left the Markovian band at step " +
                               std::to_string(k));
        }
        const double d = markov_split(angle);
        const bool right = w[k] == BounceSign::Right;
        const double a = right ? d : 0.0;
        const double b = right ? 1.0 : d;
        // Both halves reverse orientation: the cut point goes to the far vertex.
        r.offset += r.scale * b;
        r.scale *= -(b - a);
        angle = phi(w[k], angle, lambda);
        current = TableGeometry::wrap(current + value(w[k]));
    }
    const double u0 = r.offset;
    const double u1 = r.offset + r.scale;
    r.lo = r.side + std::min(u0, u1);
    r.hi = r.side + std::max(u0, u1);
    r.end_side = current;
    r.end_theta = angle;
    return r;
}

PhasePoint point_from_code(const SymbolState& state, double lambda) {
    require_markov_lambda(lambda, "point_from_code");
    SignSeries z = state.z;
    z.lambda = lambda;
    const double theta = eval_series(z).value;
    const Refinement r = refine(state.side, theta, state.w, lambda);
    return {r.midpoint(), theta};
}

SymbolState tau(const SymbolState& state) {
    if (state.w.empty()) {
        throw EmptyWord("tau: shift of an empty itinerary");
    }
    SymbolState out;
    const BounceSign first = state.w[0];
    out.w.signs.assign(state.w.signs.begin() + 1, state.w.signs.end());
    out.z.lambda = state.z.lambda;
    out.z.signs.reserve(state.z.depth() + 1);
    out.z.signs.push_back(value(first));
    for (int zn : state.z.signs) out.z.signs.push_back(-zn);
    out.side = TableGeometry::wrap(state.side + value(first));
    return out;
}

double angle_after(const ItineraryWord& w, double theta0, double lambda) {
    const std::size_t n = w.size();
    double sum = 0.0;
    double power = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
        power *= lambda;
        const double parity = (j % 2 == 1) ? 1.0 : -1.0;
        sum += parity * value(w[n - j]) * power;
    }
    const double neg_pow = (n % 2 == 0) ? power : -power;
    return (kPi / 3.0) * sum + neg_pow * theta0;
}

std::size_t connecting_depth(double eps, double lambda) {
    require_markov_lambda(lambda, "connecting_depth");
    if (!(eps > 0.0)) {
        throw DomainError("connecting_word: epsilon must be positive");
    }
    const double k = std::ceil(std::log(eps * 3.0 * (1.0 - lambda) / kPi) / std::log(lambda));
    return static_cast<std::size_t>(std::max(1.0, k));
}

ItineraryWord connecting_word(int from_side, double from_theta, int to_side, double to_theta, double eps,
                              double lambda) {
    const std::size_t k = connecting_depth(eps, lambda);
    SignSeries target;
    try {
        decode_angle(from_theta, lambda, k);
        target = decode_angle(to_theta, lambda, k);
    } catch (const OutOfCantorRange& e) {
        throw NotInCantor(std::string("connecting_word: ") + e.what());
    }

    // Reversed, sign-alternated code: after k shifts the angle code starts
    // with (a_1, ..., a_k).
    std::vector<BounceSign> core(k);
    for (std::size_t j = 1; j <= k; ++j) {
        const std::size_t idx = k - j + 1; // a index
        const int parity = ((k - j) % 2 == 0) ? 1 : -1;
        core[j - 1] = to_sign(parity * target.signs[idx - 1]);
    }
    int reached = from_side;
    for (BounceSign z : core) reached += value(z);
    const int mismatch = TableGeometry::wrap(to_side - reached);

    std::vector<BounceSign> word;
    if (mismatch == 1) {
        word.push_back(BounceSign::Right);
    } else if (mismatch == 2) {
        word.push_back(BounceSign::Right);
        word.push_back(BounceSign::Right);
    }
    word.insert(word.end(), core.begin(), core.end());
    return ItineraryWord(std::move(word));
}

PhasePoint periodic_point(const ItineraryWord& w, double lambda, int side) {
    const double theta = periodic_angle(w, lambda);
    const Refinement r = refine(side, theta, w, lambda);
    // T^m on H_m is the inverse of u = offset + scale * v; its fixed point up
    // to the rotation by the word's displacement.
    const double u = r.offset / (1.0 - r.scale);
    if (!(u > kVertexEps && u < 1.0 - kVertexEps)) {
        throw DomainError("periodic_point: the fixed point of this word is a vertex (no periodic orbit)");
    }
    return {r.side + u, theta};
}

std::size_t closing_period(const ItineraryWord& w) {
    return TableGeometry::wrap(w.displacement()) == 0 ? w.size() : 3 * w.size();
}

} // namespace pinball
