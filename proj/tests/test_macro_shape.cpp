#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lpp/macro_shape.hpp"

using namespace lpp;

TEST_CASE("gamma and gamma_homog") {
    CHECK(gamma_shape(1, 1) == 4.0);
    CHECK(gamma_shape(7, 0) == 7.0);
    CHECK(gamma_shape(4, 1) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK_THROWS_AS(gamma_shape(-1, 2), std::invalid_argument);
    CHECK(gamma_homog(1, 1, 1) == 4.0);
    CHECK(gamma_homog(2, 1, 1) == 2.0);
    CHECK(gamma_homog(0.5, 4, 1) == doctest::Approx(18.0).epsilon(1e-15));
    CHECK_THROWS_AS(gamma_homog(0, 1, 1), std::invalid_argument);
}

TEST_CASE("gamma concavity on random pairs") {
    std::uint64_t h = 5;
    auto u = [&h] {
        h = h * 6364136223846793005ULL + 1442695040888963407ULL;
        return (h >> 11) * 0x1p-53 * 10.0;
    };
    for (int i = 0; i < 200; ++i) {
        double px = u(), py = u(), qx = u(), qy = u();
        CHECK(gamma_shape(0.5 * (px + qx), 0.5 * (py + qy)) >=
              0.5 * (gamma_shape(px, py) + gamma_shape(qx, qy)) - 1e-12);
    }
}

TEST_CASE("functional_I: Jensen bound and trapezoid oracle value") {
    auto cfield = make_constant(0.5);
    Polyline bent{{{0, 0}, {1, 0.2}, {3, 2.5}}};
    CHECK(functional_I(cfield, bent) <= gamma_homog(0.5, 3, 2.5));
    Polyline straight{{{0, 0}, {3, 2.5}}};
    CHECK(functional_I(cfield, straight) == doctest::Approx(gamma_homog(0.5, 3, 2.5)));

    // trapezoid through the two-phase line, frozen arithmetic oracle:
    // a1* = 1.0303300858899105, b1*(3,2.5) = 2.984834957055005,
    // I = (1+A)*3 + (1+1/A)*2.5 - D = 17.757359312880713
    auto tp = make_two_phase(0.5, 1.0);
    double a1 = 1.0303300858899105, b1 = 2.984834957055005;
    Polyline trap{{{0, 0}, {a1, a1 - 1.0}, {b1, b1 - 1.0}, {3, 2.5}}};
    CHECK(functional_I(tp, trap) == doctest::Approx(17.757359312880713).epsilon(1e-3 / 17.75));
}

TEST_CASE("functional_I: splitting invariance and error cases") {
    auto tp = make_two_phase(0.5, 1.0);
    Polyline p{{{0, 0}, {4, 1}}};  // crosses the line once
    double v = functional_I(tp, p);
    // insert interior waypoints; value unchanged to 1e-12 relative
    Polyline q{{{0, 0}, {2.0, 0.5}, {3.1, 0.775}, {4, 1}}};
    CHECK(functional_I(tp, q) == doctest::Approx(v).epsilon(1e-12));
    Polyline bad{{{0, 0}, {2, 2}, {1, 3}}};
    CHECK_THROWS_AS(functional_I(tp, bad), std::invalid_argument);
}

TEST_CASE("functional_I: on-curve segment uses the min rate") {
    auto tp = make_two_phase(0.5, 1.0);
    Polyline along{{{1.0, 0.0}, {2.0, 1.0}}};  // runs along y = x - 1
    CHECK(functional_I(tp, along) == doctest::Approx(gamma_shape(1, 1) / 0.5).epsilon(1e-14));
}

TEST_CASE("optimize_polyline: constant and corner-sqrt closed forms") {
    auto e = optimize_polyline(make_constant(1.0), {1, 1});
    CHECK(e.value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(e.branch == "straight");

    // exactly solvable corner: Gamma = (1 - 1/r) + gamma/r, straight-line
    // maximiser through (0.25, 0.25)
    auto cs = make_corner_sqrt(2.0);
    auto ec = optimize_polyline(cs, {1, 1});
    CHECK(ec.value == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(ec.branch == "crossing-C");
    REQUIRE(ec.maximiser.pts.size() == 3);
    CHECK(ec.maximiser.pts[1].x == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(ec.maximiser.pts[1].y == doctest::Approx(0.25).epsilon(1e-7));
}

TEST_CASE("optimize_polyline: two-phase trapezoid target") {
    auto tp = make_two_phase(0.5, 1.0);
    auto e = optimize_polyline(tp, {3, 2.5});
    CHECK(e.value == doctest::Approx(17.757359312880713).epsilon(1e-4 / 17.75));
    CHECK(e.branch == "trapezoid");
}

TEST_CASE("optimize_polyline: lower-bound sandwich") {
    auto tp = make_two_phase(0.5, 1.0);
    for (auto [x, y] : {std::pair{1.0, 2.0}, {4.0, 1.0}, {2.0, 2.0}}) {
        double v = optimize_polyline(tp, {x, y}).value;
        CHECK(v >= gamma_shape(x, y) / 1.0 - 1e-9);
        CHECK(v <= gamma_shape(x, y) / 0.5 + 1e-9);
    }
    auto sg = make_step_grid({0, 1, 2}, {0, 1, 2}, {{1.0, 2.0}, {0.5, 1.0}});
    double v = optimize_polyline(sg, {1.8, 1.8}, 2, 8).value;
    CHECK(v >= gamma_shape(1.8, 1.8) / 2.0 - 1e-9);
    CHECK(v <= gamma_shape(1.8, 1.8) / 0.5 + 1e-9);
}

TEST_CASE("optimize_polyline: macroscopic superadditivity on random triples") {
    auto tp = make_two_phase(0.5, 1.0);
    std::uint64_t h = 77;
    auto u = [&h] {
        h = h * 6364136223846793005ULL + 1442695040888963407ULL;
        return (h >> 11) * 0x1p-53;
    };
    for (int i = 0; i < 25; ++i) {
        Point z{0.2 + 2.0 * u(), 0.2 + 2.0 * u()};
        Point t{z.x + 2.0 * u(), z.y + 2.0 * u()};
        double whole = optimize_polyline(tp, t, 0, 8).value;
        double parts = optimize_polyline(tp, z, 0, 8).value +
                       optimize_polyline(tp, t, 0, 8, 0, z).value;
        CHECK(whole >= parts - 1e-6);
    }
}

TEST_CASE("optimize_polyline: value matches functional_I of the maximiser") {
    for (Point t : {Point{3, 2.5}, Point{4, 1}, Point{1, 1}}) {
        auto tp = make_two_phase(0.5, 1.0);
        auto e = optimize_polyline(tp, t);
        CHECK(e.value == doctest::Approx(functional_I(tp, e.maximiser)).epsilon(1e-9));
    }
}

TEST_CASE("continuity exponent probe") {
    auto tp = make_two_phase(0.5, 1.0);
    Point t{3, 2.5};
    double v0 = optimize_polyline(tp, t).value;
    double d2 = std::abs(optimize_polyline(tp, {t.x + 1e-2, t.y + 1e-2}).value - v0);
    double d3 = std::abs(optimize_polyline(tp, {t.x + 1e-3, t.y + 1e-3}).value - v0);
    double d4 = std::abs(optimize_polyline(tp, {t.x + 1e-4, t.y + 1e-4}).value - v0);
    double e23 = std::log(d2 / d3) / std::log(10.0);
    double e34 = std::log(d3 / d4) / std::log(10.0);
    CHECK(e23 >= 0.45);
    CHECK(e34 >= 0.45);
}
