#include <doctest.h>

#include "aplab/fourier.hpp"
#include "oracles.hpp"

using namespace aplab;

namespace {

GridDensity indicator(Eigen::Index n, std::initializer_list<long> points) {
    GridDensity f(1, n);
    for (long p : points) f.values[p] = 1.0;
    return f;
}

}  // namespace

TEST_CASE("lambda3 of the constant density is 1") {
    GridDensity f(1, 16);
    f.values.setOnes();
    CHECK(lambda3_direct(f) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lambda3_spectral(f) == doctest::Approx(1.0).epsilon(1e-12));
    GridDensity g(2, 6);
    g.values.setOnes();
    CHECK(lambda3_direct(g) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("lambda3 of {0,1,2} in Z_7 is 5/49") {
    GridDensity f = indicator(7, {0, 1, 2});
    // exhaustive enumeration gives 5 progressions, three of them trivial
    CHECK(oracle::count_3aps_mod({0, 1, 2}, 7) == 5);
    CHECK(lambda3_direct(f) == doctest::Approx(5.0 / 49.0).epsilon(1e-13));
    CHECK(lambda3_spectral(f) == doctest::Approx(5.0 / 49.0).epsilon(1e-12));
}

TEST_CASE("lambda3 of a point mass of weight N is N") {
    for (Eigen::Index n : {5, 12}) {
        GridDensity f(1, n);
        f.values[0] = static_cast<double>(n);
        CHECK(lambda3_direct(f) == doctest::Approx(static_cast<double>(n)).epsilon(1e-13));
        CHECK(lambda3_spectral(f) == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    }
}

TEST_CASE("spectral and direct routes agree on random densities") {
    SUBCASE("one dimension, N = 256") {
        GridDensity f0 = oracle::random_density(1, 256, 10);
        GridDensity f1 = oracle::random_density(1, 256, 11);
        GridDensity f2 = oracle::random_density(1, 256, 12);
        double direct = lambda3_direct(f0, f1, f2);
        double spectral = lambda3_spectral(f0, f1, f2);
        CHECK(std::abs(direct - spectral) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
    SUBCASE("two dimensions and awkward lengths") {
        for (Eigen::Index n : {9, 21}) {
            GridDensity f = oracle::random_density(2, n, 100 + n);
            double direct = lambda3_direct(f);
            double spectral = lambda3_spectral(f);
            CHECK(std::abs(direct - spectral) <= 1e-9 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("lambda3 is invariant under translation and reflection") {
    GridDensity f = oracle::random_density(1, 48, 31);
    double base = lambda3_direct(f);
    for (Eigen::Index t : {1, 7, 25}) {
        GridDensity g(1, 48);
        for (Eigen::Index x = 0; x < 48; ++x) g.values[x] = f.values[(x + t) % 48];
        CHECK(lambda3_direct(g) == doctest::Approx(base).epsilon(1e-12));
    }
    GridDensity r(1, 48);
    for (Eigen::Index x = 0; x < 48; ++x) r.values[x] = f.values[(48 - x) % 48];
    CHECK(lambda3_direct(r) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("coarse upper bound by the sup norm") {
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        GridDensity f = oracle::random_density(1, 64, seed, 2.0);
        double bound = f.max_abs() * f.max_abs() * f.mass();
        CHECK(lambda3_direct(f) <= bound + 1e-12);
    }
}

TEST_CASE("lq norms") {
    SUBCASE("uniform density has unit norm for every q") {
        GridDensity f(1, 32);
        f.values.setOnes();
        Spectrum s = dual_transform(f);
        for (double q : {1.0, 2.0, 2.5, 3.0})
            CHECK(lq_norm(s, q) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("point mass of weight N has lq norm N^{1/q}") {
        GridDensity f(1, 27);
        f.values[0] = 27.0;
        Spectrum s = dual_transform(f);
        CHECK(lq_norm(s, 3.0) == doctest::Approx(std::pow(27.0, 1.0 / 3.0)).epsilon(1e-12));
    }
    SUBCASE("direct summation oracle on a random density") {
        GridDensity f = oracle::random_density(1, 40, 3);
        Spectrum s = dual_transform(f);
        double q = 2.7;
        double ref = 0.0;
        for (Eigen::Index i = 0; i < s.size(); ++i) ref += std::pow(std::abs(s.coeffs[i]), q);
        ref = std::pow(ref, 1.0 / q);
        CHECK(lq_norm(s, q) == doctest::Approx(ref).epsilon(1e-12));
        double ref_nz = 0.0;
        for (Eigen::Index i = 1; i < s.size(); ++i) ref_nz += std::pow(std::abs(s.coeffs[i]), q);
        CHECK(lq_norm(s, q, true) == doctest::Approx(std::pow(ref_nz, 1.0 / q)).epsilon(1e-12));
    }
    SUBCASE("q below one is rejected") {
        Spectrum s(1, 8);
        CHECK_THROWS_AS(lq_norm(s, 0.5), InvalidArgument);
    }
}

TEST_CASE("u2 norm") {
    GridDensity ones(1, 16);
    ones.values.setOnes();
    CHECK(u2_norm(ones) == doctest::Approx(1.0).epsilon(1e-12));

    GridDensity point(1, 16);
    point.values[0] = 16.0;
    CHECK(u2_norm(point) == doctest::Approx(std::pow(16.0, 0.25)).epsilon(1e-12));

    GridDensity f = oracle::random_density(1, 36, 17);
    CHECK(u2_norm(f) == doctest::Approx(oracle::u2_autocorrelation(f)).epsilon(1e-9));

    // dominance of the zero mode, equality only for the constant
    Spectrum s = dual_transform(f);
    CHECK(std::pow(u2_norm(f), 4.0) >= std::pow(std::abs(s.coeffs[0]), 4.0));
    CHECK(std::pow(u2_norm(ones), 4.0) ==
          doctest::Approx(std::pow(dual_transform(ones).coeffs[0].real(), 4.0)).epsilon(1e-12));
}

TEST_CASE("trivial progression contribution") {
    CHECK(trivial_ap_contribution(16, 16) == doctest::Approx(1.0 / 16.0));
    CHECK(trivial_ap_contribution(4, 16) == doctest::Approx(1.0));  // delta = N^{-1/2}
    // {0,1,2} in Z_7: the trivial share of the raw count is 3/49
    double delta = 3.0 / 7.0;
    CHECK(trivial_ap_contribution(3, 7) * delta * delta * delta ==
          doctest::Approx(3.0 / 49.0).epsilon(1e-13));
    CHECK_THROWS_AS(trivial_ap_contribution(0, 16), InvalidArgument);
}

TEST_CASE("configuration matrices validate their determinants") {
    Eigen::MatrixXi id2 = Eigen::MatrixXi::Identity(2, 2);
    CHECK_THROWS_AS(ConfigurationMatrices(id2, id2), InvalidArgument);  // M2 - M1 singular
    Eigen::MatrixXi zero = Eigen::MatrixXi::Zero(2, 2);
    CHECK_THROWS_AS(ConfigurationMatrices(zero, id2), InvalidArgument);
    CHECK_NOTHROW(ConfigurationMatrices(id2, (2 * id2).eval()));
}

TEST_CASE("configuration count specializes to lambda3") {
    GridDensity f0 = oracle::random_density(1, 15, 1);
    GridDensity f1 = oracle::random_density(1, 15, 2);
    GridDensity f2 = oracle::random_density(1, 15, 3);
    GridDensity g(1, 15);
    g.values.setOnes();
    Eigen::MatrixXi m1(1, 1), m2(1, 1);
    m1 << 1;
    m2 << 2;
    Complex c = configuration_count(f0, f1, f2, ConfigurationMatrices(m1, m2), g);
    CHECK(c.real() == doctest::Approx(lambda3_direct(f0, f1, f2)).epsilon(1e-10));
    CHECK(std::abs(c.imag()) < 1e-10);
}

TEST_CASE("configuration count of constants is 1") {
    GridDensity ones(2, 8);
    ones.values.setOnes();
    Eigen::MatrixXi m1 = Eigen::MatrixXi::Identity(2, 2);
    Eigen::MatrixXi m2(2, 2);
    m2 << 0, 1, -1, 0;  // unimodular, invertible mod any N
    Complex c = configuration_count(ones, ones, ones, ConfigurationMatrices(m1, m2), ones);
    CHECK(c.real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spatial and dual configuration counts agree on seeded 2d inputs") {
    const Eigen::Index n = 32;
    GridDensity f0 = oracle::random_density(2, n, 21);
    GridDensity f1 = oracle::random_density(2, n, 22);
    GridDensity f2 = oracle::random_density(2, n, 23);
    GridDensity g = oracle::random_density(2, n, 24);
    Eigen::MatrixXi m1 = Eigen::MatrixXi::Identity(2, 2);
    Eigen::MatrixXi m2 = 2 * Eigen::MatrixXi::Identity(2, 2);
    // M2 = 2I is singular mod 32; the dual route solves through M1 instead
    ConfigurationMatrices mats(m1, m2);
    Complex direct = configuration_count_direct(f0, f1, f2, mats, g);
    Complex dual = configuration_count_dual(f0, f1, f2, mats, g);
    CHECK(std::abs(direct - dual) <= 1e-8 * std::max(1.0, std::abs(direct)));
}

TEST_CASE("dual route reports the offending matrices when unsolvable") {
    GridDensity f(1, 16);
    f.values.setOnes();
    Eigen::MatrixXi m1(1, 1), m2(1, 1);
    m1 << 2;
    m2 << 4;
    ConfigurationMatrices mats(m1, m2);  // both even, N = 16: no inverse mod N
    CHECK_THROWS_AS(configuration_count_dual(f, f, f, mats, f), SingularMatrixError);
}
