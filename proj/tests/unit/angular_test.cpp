#include "doctest.h"

#include <cmath>
#include <vector>

#include "pinball/angular.hpp"
#include "pinball/errors.hpp"
#include "pinball/symbolic.hpp"

using namespace pinball;

namespace {

constexpr auto R = BounceSign::Right;
constexpr auto L = BounceSign::Left;

// all 2^depth sign vectors
std::vector<std::vector<int>> enumerate(int depth) {
    std::vector<std::vector<int>> out;
    for (unsigned bits = 0; bits < (1u << depth); ++bits) {
        std::vector<int> z(depth);
        for (int k = 0; k < depth; ++k) z[k] = (bits >> k) & 1u ? -1 : +1;
        out.push_back(z);
    }
    return out;
}

std::vector<int> alternating(int depth, int first) {
    std::vector<int> z(depth);
    for (int k = 0; k < depth; ++k) z[k] = k % 2 ? -first : first;
    return z;
}

// Fixed point of the affine composition phi_{w_m} o ... o phi_{w_1},
// read off from its values at 0 and 1.
double affine_fixed_point(const ItineraryWord& w, double lambda) {
    auto run = [&](double t) {
        for (auto z : w.signs) t = phi(z, t, lambda);
        return t;
    };
    const double b = run(0.0), a = run(1.0) - b;
    return b / (1.0 - a);
}

} // namespace

TEST_CASE("phi examples") {
    for (double lambda : {0.1, 0.3, 0.5, 0.9}) {
        CHECK(phi(R, theta_star(lambda), lambda) == doctest::Approx(theta_star(lambda)).epsilon(1e-15));
        CHECK(phi(L, -theta_star(lambda), lambda) == doctest::Approx(-theta_star(lambda)).epsilon(1e-15));
        CHECK(phi(R, 0.0, lambda) == doctest::Approx(lambda * kPi / 3).epsilon(1e-15));
    }
}

TEST_CASE("eval_series examples") {
    const auto all_plus = eval_series({std::vector<int>(60, +1), 0.3});
    CHECK(all_plus.value == doctest::Approx(0.4487990).epsilon(1e-7));
    CHECK(all_plus.value == doctest::Approx(cantor_sup(0.3)).epsilon(1e-14));

    for (double lambda : {0.2, 0.3, 0.45, 0.7}) {
        const auto alt = eval_series({alternating(80, +1), lambda});
        CHECK(alt.value == doctest::Approx(theta_star(lambda)).epsilon(1e-12));
    }

    const auto one = eval_series({{+1}, 0.3});
    CHECK(one.value == doctest::Approx(0.3141593).epsilon(1e-7));
    CHECK(one.tail == doctest::Approx(0.1346397).epsilon(1e-7));
    CHECK(tail_radius(0.3, 1) == one.tail);
}

TEST_CASE("eval_series stays inside the hull") {
    for (const auto& z : enumerate(10)) {
        const auto v = eval_series({z, 0.4});
        CHECK(std::abs(v.value) <= cantor_sup(0.4) + 1e-15);
    }
}

TEST_CASE("decode_angle examples") {
    const auto z = decode_angle(theta_star(0.3), 0.3, 8);
    CHECK(z.signs == alternating(8, +1));

    const auto top = decode_angle(cantor_sup(0.25), 0.25, 6);
    CHECK(top.signs == std::vector<int>(6, +1));

    // 0 sits in the central gap: no depth-6 bracket reaches it
    double closest = 1e9;
    for (const auto& w : enumerate(6)) {
        const auto v = eval_series({w, 0.3});
        closest = std::min(closest, std::abs(v.value) - v.tail);
    }
    CHECK(closest > 0.0);
    CHECK_THROWS_AS(decode_angle(0.0, 0.3, 4), OutOfCantorRange);
    CHECK_THROWS_AS(decode_angle(0.1, 0.5, 4), DomainError);
}

TEST_CASE("decode_angle inverts eval_series") {
    for (double lambda : {0.2, 0.3, 0.45}) {
        for (const auto& w : enumerate(9)) {
            std::vector<int> deep = w;
            const auto fill = alternating(30, -w.back());
            deep.insert(deep.end(), fill.begin(), fill.end());
            const double theta = eval_series({deep, lambda}).value;
            const auto back = decode_angle(theta, lambda, 9);
            CHECK(back.signs == w);
            CHECK(std::abs(eval_series(back).value - theta) <= tail_radius(lambda, 9) + 1e-12);
        }
    }
}

TEST_CASE("gaps examples") {
    const auto g = gaps(0.25, 1);
    REQUIRE(g.size() == 1);
    CHECK(g[0].center == 0.0);
    CHECK(g[0].half_width == doctest::Approx(kPi / 18).epsilon(1e-14));

    const auto g3 = gaps(0.3, 1);
    CHECK(g3[0].half_width == doctest::Approx(0.1795).epsilon(1e-3));
    CHECK(g3[0].half_width >= 0.3 * kPi / 6);

    for (const auto& gap : gaps(0.5, 5)) CHECK(gap.half_width == 0.0);
    CHECK(gaps(0.3, 6).size() == 63);
}

TEST_CASE("gaps at one level are disjoint and avoid C") {
    const double lambda = 0.3;
    const auto all = gaps(lambda, 7);
    for (int m = 1; m <= 7; ++m) {
        std::vector<GapInterval> level;
        for (const auto& g : all)
            if (g.level == m) level.push_back(g);
        CHECK(level.size() == (1u << (m - 1)));
        for (std::size_t a = 0; a < level.size(); ++a)
            for (std::size_t b = a + 1; b < level.size(); ++b)
                CHECK((level[a].hi() <= level[b].lo() || level[b].hi() <= level[a].lo()));
    }
    // deep points of C never fall strictly inside a gap
    for (const auto& w : enumerate(12)) {
        std::vector<int> deep = w;
        deep.push_back(+1);
        const double x = eval_series({deep, lambda}).value;
        for (const auto& g : all) CHECK_FALSE((x > g.lo() + 1e-12 && x < g.hi() - 1e-12));
    }
}

TEST_CASE("periodic_angle examples") {
    const auto rrr = ItineraryWord::from_ints({+1, +1, +1});
    CHECK(periodic_angle(rrr, 0.3) == doctest::Approx(0.2416610).epsilon(1e-7));
    CHECK(periodic_angle(rrr, 0.3) == doctest::Approx(affine_fixed_point(rrr, 0.3)).epsilon(1e-14));
    for (double lambda : {0.2, 0.6})
        CHECK(periodic_angle(ItineraryWord::from_ints({-1, -1, -1}), lambda) ==
              doctest::Approx(-theta_star(lambda)).epsilon(1e-14));

    const auto w4 = ItineraryWord::from_ints({+1, +1, -1, -1});
    CHECK(affine_fixed_point(w4, 0.3) == doctest::Approx(-0.2017540).epsilon(1e-6));
    CHECK(periodic_angle(w4, 0.3) == doctest::Approx(affine_fixed_point(w4, 0.3)).epsilon(1e-13));

    CHECK_THROWS_AS(periodic_angle(ItineraryWord::from_ints({+1, -1}), 0.3), WordTooShort);
}

TEST_CASE("periodic angles of all short words are fixed points") {
    for (int m = 3; m <= 8; ++m) {
        for (const auto& z : enumerate(m)) {
            const auto w = ItineraryWord::from_ints(z);
            const double theta = periodic_angle(w, 0.3);
            CHECK(std::abs(theta - affine_fixed_point(w, 0.3)) < 1e-14);
            CHECK(std::abs(angle_after(w, theta, 0.3) - theta) < 1e-14);
        }
    }
}

TEST_CASE("period3 examples") {
    const auto orbits = period3(0.5);
    CHECK(orbits[0].theta_star == doctest::Approx(kPi / 9).epsilon(1e-15));
    CHECK(orbits[0].theta_star == doctest::Approx(0.3490659).epsilon(1e-7));
    CHECK(orbits[0].s3 == doctest::Approx(0.550902).epsilon(1e-6));
    CHECK(orbits[0].orientation == +1);
    CHECK(orbits[1].theta_star == -orbits[0].theta_star);
    CHECK(orbits[1].orientation == -1);

    CHECK(theta_star(1e-9) < 1e-8);
    CHECK(s3(1e-9) == doctest::Approx(2.0 / 3).epsilon(1e-8));
    CHECK(theta_star(1.0) == doctest::Approx(kPi / 6).epsilon(1e-15));

    for (int k = 1; k <= 9; ++k) {
        const double lambda = 0.1 * k;
        for (const auto& o : period3(lambda)) {
            const auto orbit = iterate(o.point(), lambda, 3);
            REQUIRE(orbit.size() == 3);
            CHECK(std::abs(orbit.back().s - o.s3) < 1e-10);
            CHECK(std::abs(orbit.back().theta - o.theta_star) < 1e-10);
            for (auto z : orbit.signs) CHECK(value(z) == o.orientation);
        }
    }
}

TEST_CASE("expansion factor of the period-3 cycle") {
    const double lambda = 0.5;
    const auto orbit = iterate(period3(lambda)[0].point(), lambda, 3);
    const double mu = expansion_factor(orbit, lambda);
    CHECK(mu == doctest::Approx(1.8458).epsilon(1e-4));
    CHECK(mu == doctest::Approx(std::abs(orbit_jacobian(orbit, lambda).a)).epsilon(1e-8));

    const auto elastic = iterate({s3(1.0), theta_star(1.0)}, 1.0, 3);
    CHECK(expansion_factor(elastic, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    const auto open = iterate(period3(lambda)[0].point(), lambda, 2);
    CHECK_THROWS_AS(expansion_factor(open, lambda), NotClosed);
}

TEST_CASE("forward invariance of C under phi") {
    for (double lambda : {0.2, 0.3}) {
        for (const auto& z : enumerate(12)) {
            std::vector<int> deep = z;
            const auto fill = alternating(30, +1);
            deep.insert(deep.end(), fill.begin(), fill.end());
            const double theta = eval_series({deep, lambda}).value;
            for (int b : {+1, -1}) {
                const auto image = decode_angle(phi(to_sign(b), theta, lambda), lambda, 13);
                std::vector<int> expect{b};
                for (int s : z) expect.push_back(-s);
                CHECK(image.signs == expect);
            }
        }
    }
}

TEST_CASE("C lies inside the strip when lambda < 1/3") {
    for (double lambda : {0.1, 0.2, 0.3, 0.33}) {
        double sup = 0.0;
        for (const auto& z : enumerate(12)) {
            const auto v = eval_series({z, lambda});
            sup = std::max(sup, std::abs(v.value) + v.tail);
        }
        CHECK(sup < lambda * kPi / 2);
    }
}

TEST_CASE("short cycles are hyperbolic") {
    // words with displacement 0 mod 3 close after |w| steps
    int tested = 0;
    for (int m = 3; m <= 6; ++m) {
        for (const auto& z : enumerate(m)) {
            const auto w = ItineraryWord::from_ints(z);
            if (((w.displacement() % 3) + 3) % 3 != 0) continue;
            PhasePoint p;
            try {
                p = periodic_point(w, 0.3);
            } catch (const DomainError&) {
                continue; // vertex fixed point of the period-2 powers
            }
            const auto orbit = iterate(p, 0.3, w.size());
            REQUIRE(orbit.termination == Termination::Completed);
            CHECK(expansion_factor(orbit, 0.3) > 1.0);
            ++tested;
        }
    }
    CHECK(tested > 10);
}

TEST_CASE("periodic angles decode to the repeated word pattern") {
    for (int m = 3; m <= 6; ++m) {
        for (const auto& z : enumerate(m)) {
            const auto w = ItineraryWord::from_ints(z);
            const double theta = periodic_angle(w, 0.3);
            const auto code = decode_angle(theta, 0.3, 3 * m);
            // the last sign applied is the most recent bounce: b_n alternates
            // sign through the reversed word
            for (int n = 1; n <= 3 * m; ++n) {
                const int idx = ((m - n) % m + m) % m;
                const int expect = (n % 2 ? 1 : -1) * z[idx];
                CHECK(code.signs[n - 1] == expect);
            }
        }
    }
}
