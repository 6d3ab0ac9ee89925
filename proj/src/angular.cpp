#include "pinball/angular.hpp"

#include <cmath>
#include <string>

#include "pinball/errors.hpp"

namespace pinball {

double phi(BounceSign sign, double theta, double lambda) {
    return lambda * (value(sign) * (kPi / 3.0) - theta);
}

double tail_radius(double lambda, std::size_t depth) {
    return (kPi / 3.0) * std::pow(lambda, static_cast<double>(depth + 1)) / (1.0 - lambda);
}

double cantor_sup(double lambda) { return (kPi / 3.0) * lambda / (1.0 - lambda); }

namespace {

void check_series_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw DomainError("series contraction must lie in (0,1), got " + std::to_string(lambda));
    }
}

} // namespace

SeriesValue eval_series(const SignSeries& z) {
    check_series_lambda(z.lambda);
    if (z.signs.empty()) {
        throw DomainError("eval_series: depth must be at least 1");
    }
    // Horner form, innermost term first.
    double acc = 0.0;
    for (auto it = z.signs.rbegin(); it != z.signs.rend(); ++it) {
        if (*it != 1 && *it != -1) {
            throw DomainError("sign series entries must be +1 or -1");
        }
        acc = z.lambda * (*it + acc);
    }
    return {(kPi / 3.0) * acc, tail_radius(z.lambda, z.signs.size())};
}

SignSeries decode_angle(double theta, double lambda, std::size_t depth, double tolerance) {
    if (!(lambda > 0.0 && lambda < 0.5)) {
        throw DomainError("decode_angle: coding is unique only for lambda < 1/2, got " +
                          std::to_string(lambda));
    }
    if (std::abs(theta) > cantor_sup(lambda) + tolerance) {
        throw OutOfCantorRange("angle " + std::to_string(theta) + " outside the hull of C(lambda)");
    }
    SignSeries out;
    out.lambda = lambda;
    out.signs.reserve(depth);
    double remainder = theta;
    double power = 1.0;
    for (std::size_t n = 1; n <= depth; ++n) {
        power *= lambda;
        const int z = remainder >= 0.0 ? +1 : -1;
        remainder -= z * (kPi / 3.0) * power;
        out.signs.push_back(z);
        if (std::abs(remainder) > tail_radius(lambda, n) + tolerance) {
            throw OutOfCantorRange("angle " + std::to_string(theta) + " falls in a gap of C(lambda) at level " +
                                   std::to_string(n));
        }
    }
    return out;
}

double gap_half_width(double lambda, int level) {
    return (kPi / 3.0) * ((1.0 - 2.0 * lambda) / (1.0 - lambda)) * std::pow(lambda, level);
}

std::vector<GapInterval> gaps(double lambda, int max_level) {
    if (!(lambda > 0.0 && lambda <= 0.5)) {
        throw DomainError("gaps: C(lambda) has gaps only for lambda <= 1/2, got " + std::to_string(lambda));
    }
    std::vector<GapInterval> out;
    std::vector<double> sums{0.0}; // partial sums of length m-1
    for (int m = 1; m <= max_level; ++m) {
        const double half = std::max(0.0, gap_half_width(lambda, m));
        for (double c : sums) {
            out.push_back({c, half, m});
        }
        const double term = (kPi / 3.0) * std::pow(lambda, m);
        std::vector<double> next;
        next.reserve(2 * sums.size());
        for (double c : sums) {
            next.push_back(c - term);
            next.push_back(c + term);
        }
        sums = std::move(next);
    }
    return out;
}

double periodic_angle(const ItineraryWord& w, double lambda) {
    const std::size_t m = w.size();
    if (m < 3) {
        throw WordTooShort("periodic orbits in the triangle have period >= 3, got word of length " +
                           std::to_string(m));
    }
    double sum = 0.0;
    double power = 1.0;
    for (std::size_t j = 1; j <= m; ++j) {
        power *= lambda;
        const double parity = (j % 2 == 1) ? 1.0 : -1.0;
        sum += parity * value(w[m - j]) * power;
    }
    const double neg_pow = (m % 2 == 0) ? power : -power; // (-lambda)^m
    return (kPi / 3.0) * sum / (1.0 - neg_pow);
}

double theta_star(double lambda) { return (kPi / 3.0) * lambda / (lambda + 1.0); }

double s3(double lambda) { return 2.0 / (kSqrt3 * std::tan(theta_star(lambda)) + 3.0); }

std::array<Period3Orbit, 2> period3(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw DomainError("period3: lambda must lie in (0,1), got " + std::to_string(lambda));
    }
    const double t = theta_star(lambda);
    const double s = s3(lambda);
    // The mirror orbit is the reflection u -> 1-u, theta -> -theta of side 0.
    return {Period3Orbit{t, s, +1}, Period3Orbit{-t, 1.0 - s, -1}};
}

double expansion_factor(const OrbitRecord& orbit, double lambda) {
    if (orbit.termination != Termination::Completed || orbit.empty()) {
        throw NotClosed("expansion_factor needs a complete, non-empty orbit");
    }
    const PhasePoint& end = orbit.back();
    const double ds = std::abs(end.s - orbit.start.s);
    const double dtheta = std::abs(end.theta - orbit.start.theta);
    if (ds > kClosureTolerance || dtheta > kClosureTolerance) {
        throw NotClosed("orbit residual (" + std::to_string(ds) + ", " + std::to_string(dtheta) +
                        ") exceeds closure tolerance");
    }
    double mu = 1.0;
    for (double eta : orbit.incoming) {
        mu *= std::cos(lambda * eta) / std::cos(eta);
    }
    return mu;
}

} // namespace pinball
