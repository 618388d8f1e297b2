#include <doctest.h>

#include "aplab/fft.hpp"
#include "oracles.hpp"

using namespace aplab;

TEST_CASE("constant density transforms to a single coefficient") {
    GridDensity f(1, 8);
    f.values.setOnes();
    Spectrum s = dual_transform(f);
    CHECK(s.coeffs[0].real() == doctest::Approx(1.0).epsilon(1e-14));
    for (Eigen::Index i = 1; i < 8; ++i) CHECK(std::abs(s.coeffs[i]) < 1e-14);
}

TEST_CASE("point mass transforms to the constant spectrum") {
    GridDensity f(1, 8);
    f.values[0] = 8.0;
    Spectrum s = dual_transform(f);
    for (Eigen::Index i = 0; i < 8; ++i)
        CHECK(std::abs(s.coeffs[i] - Complex(1.0, 0.0)) < 1e-13);
}

TEST_CASE("coefficient on Z_7 matches direct summation") {
    GridDensity f(1, 7);
    f.values[0] = f.values[1] = f.values[2] = 1.0;
    Spectrum s = dual_transform(f);
    Complex expected =
        (Complex(1, 0) + std::polar(1.0, -2 * kPi / 7) + std::polar(1.0, -4 * kPi / 7)) / 7.0;
    CHECK(std::abs(s.at({1}) - expected) < 1e-14);
    CHECK(std::abs(s.at({1}) - oracle::dft_coeff(f, {1})) < 1e-14);
    // non power of two length goes through the chirp-z path
    for (long xi = -3; xi <= 3; ++xi)
        CHECK(std::abs(s.at({xi}) - oracle::dft_coeff(f, {xi})) < 1e-13);
}

TEST_CASE("round trip is the identity within 1e-12") {
    for (Eigen::Index n : {8, 12, 31, 64, 81}) {
        GridDensity f = oracle::random_density(1, n, 77 + n);
        GridDensity g = inverse_transform(dual_transform(f));
        CHECK((f.values - g.values).abs().maxCoeff() < 1e-12);
    }
    GridDensity f2 = oracle::random_density(2, 12, 9);
    GridDensity g2 = inverse_transform(dual_transform(f2));
    CHECK((f2.values - g2.values).abs().maxCoeff() < 1e-12);
}

TEST_CASE("inverse of synthetic spectra") {
    SUBCASE("single coefficient gives constant") {
        Spectrum s(1, 9);
        s.coeffs[0] = 1.0;
        GridDensity f = inverse_transform(s);
        CHECK((f.values - 1.0).abs().maxCoeff() < 1e-13);
    }
    SUBCASE("all-ones spectrum gives point mass") {
        Spectrum s(1, 9);
        s.coeffs.setOnes();
        GridDensity f = inverse_transform(s);
        CHECK(f.values[0] == doctest::Approx(9.0).epsilon(1e-12));
        for (Eigen::Index i = 1; i < 9; ++i) CHECK(std::abs(f.values[i]) < 1e-12);
    }
}

TEST_CASE("Parseval holds on random densities") {
    for (Eigen::Index n : {16, 27, 40}) {
        GridDensity f = oracle::random_density(1, n, 1234 + n);
        Spectrum s = dual_transform(f);
        double phys = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) phys += f.values[i] * f.values[i];
        phys /= static_cast<double>(n);
        double freq = s.coeffs.abs2().sum();
        CHECK(phys == doctest::Approx(freq).epsilon(1e-12));
    }
    GridDensity f2 = oracle::random_density(2, 18, 5);
    Spectrum s2 = dual_transform(f2);
    double phys = f2.values.square().sum() / static_cast<double>(f2.size());
    CHECK(phys == doctest::Approx(s2.coeffs.abs2().sum()).epsilon(1e-12));
}

TEST_CASE("conjugate symmetry for real densities") {
    GridDensity f = oracle::random_density(2, 10, 42);
    Spectrum s = dual_transform(f);
    for (long a = -4; a <= 4; ++a)
        for (long b = -4; b <= 4; ++b)
            CHECK(std::abs(s.at({-a, -b}) - std::conj(s.at({a, b}))) < 1e-13);
}

TEST_CASE("shape mismatch raises a structured error") {
    Spectrum s(1, 8);
    CHECK_THROWS_AS(s.at({1, 2}), ShapeError);
    CHECK_THROWS_AS(GridDensity(1, 8, ArrayXd::Zero(5)), ShapeError);
}
