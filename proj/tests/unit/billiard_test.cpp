#include "doctest.h"

#include <cmath>
#include <variant>

#include "pinball/angular.hpp"
#include "pinball/attractor.hpp"
#include "pinball/billiard.hpp"
#include "pinball/errors.hpp"
#include "pinball/rng.hpp"

using namespace pinball;

namespace {

// Angle of the chord from (px,py) on side 1 to the origin, from the side's
// inward normal. Written out by hand rather than through TableGeometry.
double side1_angle_to_origin(double px, double py) {
    const double tx = -0.5, ty = kSqrt3 / 2; // tangent V1 -> V2
    const double nx = -kSqrt3 / 2, ny = -0.5; // inward normal
    const double dx = -px, dy = -py;
    return std::atan2(dx * tx + dy * ty, dx * nx + dy * ny);
}

Step as_step(const StepOutcome& o) {
    REQUIRE(std::holds_alternative<Step>(o));
    return std::get<Step>(o);
}

} // namespace

TEST_CASE("delta: midpoint, endpoint limits, ray oracle") {
    CHECK(std::abs(delta(0.5)) < 1e-15);
    CHECK(delta(1e-9) == doctest::Approx(kPi / 6).epsilon(1e-7));
    CHECK(delta(1 - 1e-9) == doctest::Approx(-kPi / 6).epsilon(1e-7));
    CHECK(delta(2 + 1e-9) == doctest::Approx(kPi / 6).epsilon(1e-7));

    // s = 1.25 is a quarter of the way up side 1
    const double px = 1.0 - 0.25 * 0.5, py = 0.25 * kSqrt3 / 2;
    const double oracle = side1_angle_to_origin(px, py);
    CHECK(oracle == doctest::Approx(0.2810349).epsilon(1e-6));
    CHECK(std::abs(delta(1.25) - oracle) < 1e-12);
}

TEST_CASE("step: period-3 point moves one side over") {
    const PhasePoint p{0.550902, 0.349066};
    const Step st = as_step(step({s3(0.5), theta_star(0.5)}, 0.5));
    CHECK(st.sign == BounceSign::Right);
    CHECK(st.next.s == doctest::Approx(1.550902).epsilon(1e-6));
    CHECK(st.next.theta == doctest::Approx(0.349066).epsilon(1e-6));
    const Step rounded = as_step(step(p, 0.5));
    CHECK(rounded.sign == BounceSign::Right);
    CHECK(rounded.next.side() == 1);
}

TEST_CASE("step: aiming at the apex is a vertex hit") {
    for (double lambda : {0.1, 0.5, 1.0}) CHECK(std::holds_alternative<VertexHit>(step({0.5, 0.0}, lambda)));
}

TEST_CASE("step: elastic bounce at pi/4 from the base midpoint") {
    const Step st = as_step(step({0.5, kPi / 4}, 1.0));
    CHECK(st.sign == BounceSign::Right);
    CHECK(std::abs(st.next.theta - kPi / 12) < 1e-14);
    // ray (0.5,0) + t(1,1)/sqrt2 against the line sqrt3 x + y = sqrt3
    const double a = kSqrt3 / (2 * (kSqrt3 + 1));
    const double u = 1 - 2 * a;
    CHECK(u == doctest::Approx(0.366025403784).epsilon(1e-10));
    CHECK(std::abs(st.next.s - (1 + u)) < 1e-13);
}

TEST_CASE("invalid phase points and lambdas are rejected") {
    CHECK_THROWS_AS(step({0.0, 0.1}, 0.5), DomainError);
    CHECK_THROWS_AS(step({1.0, 0.1}, 0.5), DomainError);
    CHECK_THROWS_AS(step({0.3, kPi / 2}, 0.5), DomainError);
    CHECK_THROWS_AS(step({0.3, 0.1}, 0.0), DomainError);
    CHECK_THROWS_AS(step({0.3, 0.1}, 1.5), DomainError);
    CHECK_THROWS_AS(step({std::nan(""), 0.1}, 0.5), DomainError);
}

TEST_CASE("jacobian: upper triangular, lower-right -lambda") {
    RandomStream rng(11);
    for (int k = 0; k < 200; ++k) {
        const PhasePoint p{rng.uniform(0.0, 3.0), rng.uniform(-1.5, 1.5)};
        const double lambda = rng.uniform(0.05, 1.0);
        const auto o = step(p, lambda);
        if (!std::holds_alternative<Step>(o)) continue;
        const auto j = jacobian_step(p, std::get<Step>(o), lambda);
        CHECK(j.c == 0.0);
        CHECK(j.d == doctest::Approx(-lambda).epsilon(1e-15));
        CHECK(j.a < 0.0);
    }
}

TEST_CASE("jacobian: symmetric elastic bounce has A = 1") {
    // at lambda = 1 the period-3 orbit leaves and arrives at pi/6
    const PhasePoint p{s3(1.0), theta_star(1.0)};
    const Step st = as_step(step(p, 1.0));
    CHECK(std::abs(std::abs(st.incoming) - p.theta) < 1e-14);
    const auto j = jacobian_step(p, st, 1.0);
    CHECK(std::abs(j.a) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("determinant along the period-3 cycle is lambda^3 mu_3") {
    // lambda^3 alone would be 0.125; the diagonal entry A contributes mu_3.
    const double lambda = 0.5;
    const auto orbit = iterate({s3(lambda), theta_star(lambda)}, lambda, 3);
    const auto j = orbit_jacobian(orbit, lambda);
    const double mu3 = std::pow(std::cos(theta_star(lambda)) / std::cos(theta_star(lambda) / lambda), 3);
    CHECK(mu3 == doctest::Approx(1.8458).epsilon(1e-4));
    CHECK(std::abs(std::abs(j.determinant()) - 0.125 * mu3) < 1e-12);
    CHECK(std::abs(j.determinant()) == doctest::Approx(0.2307).epsilon(1e-3));
    CHECK(j.d == doctest::Approx(-0.125).epsilon(1e-14));
}

TEST_CASE("determinant law along random orbit segments") {
    RandomStream rng(5);
    for (int k = 0; k < 30; ++k) {
        const double lambda = rng.uniform(0.1, 0.95);
        const auto orbit = iterate({rng.uniform(0.0, 3.0), rng.uniform(-1.4, 1.4)}, lambda, 12);
        if (orbit.termination != Termination::Completed) continue;
        double prod_a = 1.0;
        PhasePoint at = orbit.start;
        for (std::size_t i = 0; i < orbit.size(); ++i) {
            prod_a *= std::cos(at.theta) / std::cos(orbit.incoming[i]);
            at = orbit.points[i];
        }
        const auto j = orbit_jacobian(orbit, lambda);
        const double law = std::pow(lambda, 12) * prod_a;
        CHECK(std::abs(j.determinant()) == doctest::Approx(law).epsilon(1e-10 * 12));
        CHECK(std::abs(j.d) == doctest::Approx(std::pow(lambda, 12)).epsilon(1e-12));
    }
}

TEST_CASE("iterate: cycle, vertex termination, empty run") {
    const PhasePoint p{s3(0.5), theta_star(0.5)};
    const auto orbit = iterate(p, 0.5, 3);
    REQUIRE(orbit.size() == 3);
    CHECK(orbit.termination == Termination::Completed);
    for (auto z : orbit.signs) CHECK(z == BounceSign::Right);
    CHECK(std::abs(orbit.back().s - p.s) < 1e-10);
    CHECK(std::abs(orbit.back().theta - p.theta) < 1e-10);

    const auto hit = iterate({0.5, 0.0}, 0.7, 10);
    CHECK(hit.termination == Termination::VertexHit);
    CHECK(hit.empty());

    const auto none = iterate(p, 0.5, 0);
    CHECK(none.empty());
    CHECK(none.termination == Termination::Completed);
    CHECK(none.back() == p);
}

TEST_CASE("domain split decides the landing side") {
    RandomStream rng(21);
    for (int k = 0; k < 2000; ++k) {
        const PhasePoint p{rng.uniform(0.0, 3.0), rng.uniform(-1.5, 1.5)};
        const auto o = step(p, 0.6);
        if (!std::holds_alternative<Step>(o)) continue;
        const auto& st = std::get<Step>(o);
        const bool right = p.theta > delta(p.s);
        CHECK(right == (st.sign == BounceSign::Right));
        CHECK(st.next.side() == TableGeometry::wrap(p.side() + (right ? 1 : -1)));
    }
}

TEST_CASE("angles contract into the strip") {
    RandomStream rng(22);
    for (double lambda : {0.2, 0.5, 0.9}) {
        for (int k = 0; k < 1000; ++k) {
            const auto o = step({rng.uniform(0.0, 3.0), rng.uniform(-1.57, 1.57)}, lambda);
            if (!std::holds_alternative<Step>(o)) continue;
            CHECK(std::abs(std::get<Step>(o).next.theta) <= lambda * kPi / 2 + 1e-12);
        }
    }
}

TEST_CASE("new angle does not depend on s within a domain") {
    RandomStream rng(23);
    for (int k = 0; k < 300; ++k) {
        const double theta = rng.uniform(0.6, 1.5); // above delta everywhere: right bounce
        const double s1 = rng.uniform(0.01, 0.99), s2 = rng.uniform(0.01, 0.99);
        const auto a = step({s1, theta}, 0.4), b = step({s2, theta}, 0.4);
        if (!std::holds_alternative<Step>(a) || !std::holds_alternative<Step>(b)) continue;
        CHECK(std::get<Step>(a).next.theta == std::get<Step>(b).next.theta);
        CHECK(std::get<Step>(a).next.theta == doctest::Approx(phi(BounceSign::Right, theta, 0.4)).epsilon(1e-14));
    }
}

TEST_CASE("closed forms s3 and ell agree with the geometry") {
    for (int k = 1; k <= 19; ++k) {
        const double lambda = 0.05 * k;
        const auto orbit = iterate({s3(lambda), theta_star(lambda)}, lambda, 1);
        REQUIRE(orbit.size() == 1);
        CHECK(std::abs(orbit.points[0].s - (1.0 + s3(lambda))) < 1e-10);

        const double t = kPi / 6 + (lambda * kPi / 2 - kPi / 6) * 0.5;
        if (t <= kPi / 6) continue;
        const auto land = extended_landing(0, 0.0, t, BounceSign::Right, lambda);
        CHECK(land.side == 1);
        CHECK(std::abs(1.0 + land.u - InaccessibleBoundary::ell(t)) < 1e-10);
    }
}

TEST_CASE("finite differences match the Jacobian") {
    RandomStream rng(31);
    const double h = 1e-7;
    int tested = 0;
    while (tested < 100) {
        const double lambda = tested % 2 ? 0.7 : 0.3;
        const PhasePoint p{rng.uniform(0.0, 3.0), rng.uniform(-1.4, 1.4)};
        const double u = p.local();
        if (u < 1e-3 || u > 1 - 1e-3 || std::abs(p.theta - delta(p.s)) < 1e-3) continue;
        const auto o = step(p, lambda);
        if (!std::holds_alternative<Step>(o)) continue;
        const auto j = jacobian_step(p, std::get<Step>(o), lambda);
        auto next = [&](double ds, double dt) {
            const auto r = step({p.s + ds, p.theta + dt}, lambda);
            REQUIRE(std::holds_alternative<Step>(r));
            return std::get<Step>(r).next;
        };
        const auto sp = next(h, 0), sm = next(-h, 0), tp = next(0, h), tm = next(0, -h);
        const double a = (sp.s - sm.s) / (2 * h), b = (tp.s - tm.s) / (2 * h);
        const double c = (sp.theta - sm.theta) / (2 * h), d = (tp.theta - tm.theta) / (2 * h);
        CHECK(a == doctest::Approx(j.a).epsilon(1e-5));
        CHECK(b == doctest::Approx(j.b).epsilon(1e-5));
        CHECK(std::abs(c) < 1e-6);
        CHECK(d == doctest::Approx(j.d).epsilon(1e-5));
        ++tested;
    }
}

TEST_CASE("elastic limit reflects the incoming angle") {
    RandomStream rng(41);
    for (int k = 0; k < 500; ++k) {
        const auto o = step({rng.uniform(0.0, 3.0), rng.uniform(-1.5, 1.5)}, 1.0);
        if (!std::holds_alternative<Step>(o)) continue;
        const auto& st = std::get<Step>(o);
        CHECK(std::abs(std::abs(st.next.theta) - std::abs(st.incoming)) < 1e-13);
    }
}
