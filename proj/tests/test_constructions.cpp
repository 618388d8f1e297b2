#include <doctest.h>

#include "aplab/constructions.hpp"
#include "aplab/fourier.hpp"
#include "oracles.hpp"

using namespace aplab;

TEST_CASE("integer set validation and round trip") {
    CHECK_THROWS_AS(IntegerSet(10, {3, 3}), InvalidArgument);
    CHECK_THROWS_AS(IntegerSet(10, {10}), InvalidArgument);
    IntegerSet s(10, {7, 1, 4});
    CHECK(s.elements == std::vector<long>({1, 4, 7}));
    IntegerSet back = IntegerSet::deserialize(s.serialize(), 10);
    CHECK(back.elements == s.elements);
}

TEST_CASE("progression-free oracle") {
    CHECK(max_ap_free_oracle(1) == 1);
    CHECK(max_ap_free_oracle(2) == 2);
    CHECK(max_ap_free_oracle(5) == 4);  // {0,1,3,4}
    CHECK(is_progression_free(IntegerSet(5, {0, 1, 3, 4})));
    CHECK(max_ap_free_oracle(9) == 5);
    CHECK_THROWS_AS(max_ap_free_oracle(64), InvalidArgument);
    // monotone in N
    int prev = 0;
    for (int n = 1; n <= 14; ++n) {
        int v = max_ap_free_oracle(n);
        CHECK(v >= prev);
        prev = v;
    }
    // agreement with the test-side exhaustive search
    for (int n : {6, 9, 11}) CHECK(max_ap_free_oracle(n) == oracle::max_ap_free_exhaustive(n));
}

TEST_CASE("behrend construction") {
    SUBCASE("progression-free by the exhaustive integer check") {
        for (long n : {100L, 1000L, 20000L}) {
            IntegerSet e = behrend_set(n);
            CHECK(is_progression_free(e));
            CHECK(!oracle::has_integer_3ap(e.elements));
        }
    }
    SUBCASE("does not exceed the exhaustive maximum at N = 9") {
        CHECK(static_cast<int>(behrend_set(9).elements.size()) <= 5);
    }
    SUBCASE("no wraparound progressions after prime embedding") {
        IntegerSet e = behrend_set(500);
        long m = next_prime_at_least(2 * 500 + 1);
        long long triples = count_progressions_mod(e, m);
        CHECK(triples == static_cast<long long>(e.elements.size()));  // only trivial ones
        // and the normalized indicator count matches the trivial contribution
        GridDensity f = e.indicator(m);
        double delta = static_cast<double>(e.elements.size()) / static_cast<double>(m);
        f.values /= delta;
        double lam = lambda3_spectral(f);
        CHECK(lam == doctest::Approx(trivial_ap_contribution(e.elements.size(), m)).epsilon(1e-9));
    }
}

TEST_CASE("seeded random sets") {
    IntegerSet full = random_set(100, 1.0, 9);
    CHECK(full.elements.size() == 100);
    IntegerSet a = random_set(300, 0.5, 1234);
    IntegerSet b = random_set(300, 0.5, 1234);
    CHECK(a.elements == b.elements);
    IntegerSet c = random_set(10000, 0.3, 777);
    double sigma = std::sqrt(0.3 * 0.7 / 10000.0);
    CHECK(std::abs(c.density() - 0.3) < 5 * sigma);
    CHECK_THROWS_AS(random_set(10, 0.0, 1), InvalidArgument);
}

TEST_CASE("self-similar transform") {
    SelfSimilarMeasure cantor = SelfSimilarMeasure::middle_thirds();
    SUBCASE("unit mass at frequency zero") {
        VectorXd xi(1);
        xi << 0.0;
        CHECK(std::abs(self_similar_fourier(cantor, xi) - Complex(1, 0)) < 1e-15);
    }
    SUBCASE("modulus is bounded by one and conjugate-symmetric") {
        for (double x : {0.5, 1.0, 3.7, 12.0, 100.0}) {
            VectorXd xi(1), mxi(1);
            xi << x;
            mxi << -x;
            Complex v = self_similar_fourier(cantor, xi);
            CHECK(std::abs(v) <= 1.0 + 1e-13);
            CHECK(std::abs(self_similar_fourier(cantor, mxi) - std::conj(v)) < 1e-13);
        }
    }
    SUBCASE("self-similarity along powers of the base") {
        VectorXd one(1);
        one << 1.0;
        double ref = std::abs(self_similar_fourier(cantor, one, 80));
        for (int m = 1; m <= 8; ++m) {
            VectorXd xi(1);
            xi << std::pow(3.0, m);
            CHECK(std::abs(self_similar_fourier(cantor, xi, 80 + 2 * m)) ==
                  doctest::Approx(ref).epsilon(1e-9));
        }
    }
    SUBCASE("full digit set converges to the sinc transform") {
        SelfSimilarMeasure leb = SelfSimilarMeasure::full_digits(2);
        for (double x : {0.25, 0.5, 1.5, 2.25}) {
            VectorXd xi(1);
            xi << x;
            Complex v = self_similar_fourier(leb, xi, 60);
            Complex expected = std::polar(1.0, -kPi * x) *
                               (x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x));
            CHECK(std::abs(v - expected) < 1e-10);
        }
        for (double k : {1.0, 2.0, 7.0}) {
            VectorXd xi(1);
            xi << k;
            CHECK(std::abs(self_similar_fourier(leb, xi, 60)) < 1e-12);
        }
    }
    SUBCASE("deeper truncation moves the value within the tail bound") {
        for (double x : {2.0, 9.0, 50.0}) {
            VectorXd xi(1);
            xi << x;
            for (int k = 8; k <= 14; ++k) {
                Complex a = self_similar_fourier(cantor, xi, k);
                Complex b = self_similar_fourier(cantor, xi, k + 1);
                CHECK(std::abs(a - b) <= 2 * kPi * x * std::pow(3.0, -k) + 1e-15);
            }
        }
    }
    SUBCASE("sampled spectrum is positive-definite") {
        // Gram matrix on a handful of frequencies stays PSD
        std::vector<double> freqs = {0.0, 0.5, 1.0, 2.0, 3.5, 5.0};
        Eigen::MatrixXcd gram(freqs.size(), freqs.size());
        for (std::size_t i = 0; i < freqs.size(); ++i)
            for (std::size_t j = 0; j < freqs.size(); ++j) {
                VectorXd xi(1);
                xi << freqs[i] - freqs[j];
                gram(i, j) = self_similar_fourier(cantor, xi, 60);
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("measure serialization round trip") {
    SelfSimilarMeasure mu = SelfSimilarMeasure::middle_thirds(2);
    mu.depth = 36;
    SelfSimilarMeasure back = SelfSimilarMeasure::deserialize(mu.serialize());
    CHECK(back.dim() == 2);
    CHECK(back.depth == 36);
    CHECK(back.axes[0].base == 3);
    CHECK(back.axes[1].digits == std::vector<int>({0, 2}));
    VectorXd xi(2);
    xi << 1.5, -2.0;
    CHECK(std::abs(self_similar_fourier(mu, xi) - self_similar_fourier(back, xi)) < 1e-15);
}

TEST_CASE("discretization") {
    SUBCASE("level zero is a point mass") {
        GridDensity f = discretize(SelfSimilarMeasure::middle_thirds(), 27, 0);
        CHECK(f.values[0] == doctest::Approx(27.0));
        CHECK(f.mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("full digit set is uniform") {
        GridDensity f = discretize(SelfSimilarMeasure::full_digits(3), 27, 3);
        CHECK((f.values - 1.0).abs().maxCoeff() < 1e-12);
    }
    SUBCASE("mass is preserved") {
        GridDensity f = discretize(SelfSimilarMeasure::middle_thirds(), 81, 4);
        CHECK(f.mass() == doctest::Approx(1.0).epsilon(1e-12));
        GridDensity f2 = discretize(SelfSimilarMeasure::middle_thirds(2), 27, 3);
        CHECK(f2.mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("low-frequency spectrum matches the closed form") {
        const Eigen::Index n = 6561;  // 3^8
        SelfSimilarMeasure cantor = SelfSimilarMeasure::middle_thirds();
        GridDensity f = discretize(cantor, n, 8);
        Spectrum s = dual_transform(f);
        for (long k = 1; k <= 10; ++k) {
            VectorXd xi(1);
            xi << static_cast<double>(k);
            Complex exact = self_similar_fourier(cantor, xi, 60);
            CHECK(std::abs(s.at({k}) - exact) <= 0.02);
        }
    }
    SUBCASE("insufficient resolution is an error") {
        CHECK_THROWS_AS(discretize(SelfSimilarMeasure::middle_thirds(), 8, 3), ResolutionError);
    }
}

TEST_CASE("prime helper") {
    CHECK(next_prime_at_least(2) == 2);
    CHECK(next_prime_at_least(8) == 11);
    CHECK(next_prime_at_least(2001) == 2003);
}
