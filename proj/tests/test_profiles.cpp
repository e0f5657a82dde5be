#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "randsrc/profiles.hpp"

using namespace randsrc;

TEST_CASE("step profile follows the half-open interval convention") {
    const auto f = TemporalProfile::two_step();  // 1.5 on (0.2,0.6], 1.0 on (0.6,0.8]
    CHECK(f(0.0) == 0.0);
    CHECK(f(0.2) == 0.0);
    CHECK(f(0.2 + 1e-12) == 1.5);
    CHECK(f(0.4) == 1.5);
    CHECK(f(0.6) == 1.5);
    CHECK(f(0.6 + 1e-12) == 1.0);
    CHECK(f(0.8) == 1.0);
    CHECK(f(0.8 + 1e-12) == 0.0);
    CHECK(f(1.0) == 0.0);
}

TEST_CASE("named temporal profiles resolve and evaluate") {
    CHECK(TemporalProfile::named("sine")(0.25) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(TemporalProfile::named("cosine2")(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(TemporalProfile::named("cosine2")(0.5) ==
          doctest::Approx(0.6 + 0.3 - 0.3).epsilon(1e-14));
    CHECK(TemporalProfile::named("steps")(0.5) == 1.5);
    CHECK(TemporalProfile::named("const:2.5")(0.77) == 2.5);
    CHECK_THROWS_AS(TemporalProfile::named("fourier"), std::invalid_argument);
}

TEST_CASE("tabulated temporal profile interpolates and clamps") {
    const auto f = TemporalProfile::tabulated({0.0, 1.0, 0.5}, 0.25);  // samples at t = 0, 0.25, 0.5
    CHECK(f(0.0) == 0.0);
    CHECK(f(0.25) == 1.0);
    CHECK(f(0.125) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f(0.375) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(f(-1.0) == 0.0);   // clamped to the first sample
    CHECK(f(9.0) == 0.5);    // clamped to the last
    CHECK_THROWS_AS(TemporalProfile::tabulated({1.0}, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(TemporalProfile::tabulated({1.0, 2.0}, 0.0), std::invalid_argument);
}

TEST_CASE("tabulated spatial profile interpolates on the unit interval") {
    const auto g = SpatialProfile::tabulated_1d({0.0, 2.0, 0.0});  // hat on [0,1]
    CHECK(g(Point{0.0, 0.0}) == 0.0);
    CHECK(g(Point{0.5, 0.0}) == 2.0);
    CHECK(g(Point{0.25, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g(Point{1.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(SpatialProfile::tabulated_1d({1.0}), std::invalid_argument);
}

TEST_CASE("named spatial profiles check their dimension") {
    CHECK(named_spatial_profile("bubble", 1)(Point{0.5, 0.0}) == 0.25);
    CHECK(named_spatial_profile("bubble2d", 2)(Point{0.5, 0.5}) == 0.0625);
    CHECK_THROWS_AS(named_spatial_profile("bubble", 2), std::invalid_argument);
    CHECK_THROWS_AS(named_spatial_profile("bubble2d", 1), std::invalid_argument);
    CHECK_THROWS_AS(named_spatial_profile("gauss", 1), std::invalid_argument);
}

TEST_CASE("custom profiles carry their names") {
    const auto f = TemporalProfile::custom([](double t) { return t * t; }, "quadratic");
    CHECK(f.name() == "quadratic");
    CHECK(f(3.0) == 9.0);
    const auto g = SpatialProfile::custom(1, [](Point p) { return p.x; }, "ramp");
    CHECK(g.name() == "ramp");
    CHECK(g.dim() == 1);
    CHECK_FALSE(g.known_coefficient(ModeIndex{1, 0}).has_value());
}
