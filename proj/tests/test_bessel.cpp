#include <doctest.h>

#include <cmath>

#include "aplab/bessel.hpp"

using namespace aplab;

TEST_CASE("series constant term") { CHECK(bessel_j(2, 0.0) == doctest::Approx(1.0)); }

TEST_CASE("half-integer closed forms have no remainder") {
    for (double r = 0.01; r < 50.0; r *= 1.7) {
        BesselSplit s1 = bessel_kernel(1, r);
        CHECK(s1.j == doctest::Approx(std::sqrt(2.0 / (kPi * r)) * std::cos(r)).epsilon(1e-14));
        CHECK(s1.k == 0.0);
        BesselSplit s3 = bessel_kernel(3, r);
        CHECK(s3.k == 0.0);
    }
}

TEST_CASE("agreement with the standard library across the seam") {
    for (double r : {0.1, 1.0, 5.0, 12.0, 19.5, 19.999, 20.001, 21.0, 35.0, 120.0, 900.0}) {
        double mine = bessel_j(2, r);
        double ref = std::cyl_bessel_j(0.0, r);
        CHECK(std::abs(mine - ref) < 2e-10);
    }
    for (double r : {0.5, 3.0, 17.0, 60.0}) {
        CHECK(std::abs(bessel_j(3, r) - std::cyl_bessel_j(0.5, r)) < 1e-12);
    }
}

TEST_CASE("branches match at the seam to 1e-10") {
    // both branches evaluated just inside their windows near r = 20
    double below = bessel_j(2, 20.0);
    double above = bessel_j(2, std::nextafter(20.0, 21.0));
    CHECK(std::abs(below - above) < 1e-10);
}

TEST_CASE("remainder obeys the two-power envelope") {
    // |K(r)| <= C min(r^{-1/2}, r^{-3/2}); C frozen after calibration runs
    const double frozen_c = 1.0;
    for (double r = 0.01; r <= 1000.0; r *= 1.25) {
        BesselSplit s = bessel_kernel(2, r);
        double envelope = std::min(1.0 / std::sqrt(r), std::pow(r, -1.5));
        CHECK(std::abs(s.k) <= frozen_c * envelope);
    }
}

TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(bessel_j(2, -1.0), InvalidArgument);
    CHECK_THROWS_AS(bessel_j(5, 1.0), InvalidArgument);
}
