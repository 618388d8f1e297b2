#ifndef APLAB_CONSTRUCTIONS_HPP
#define APLAB_CONSTRUCTIONS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aplab/types.hpp"

namespace aplab {

// ---------------------------------------------------------------------------
// Integer sets
// ---------------------------------------------------------------------------

struct IntegerSet {
    long ambient = 0;            // elements live in [0, ambient)
    std::vector<long> elements;  // sorted, distinct

    IntegerSet() = default;
    IntegerSet(long ambient_, std::vector<long> elems);

    double density() const {
        return static_cast<double>(elements.size()) / static_cast<double>(ambient);
    }

    // Indicator density on Z_n (n >= ambient).
    GridDensity indicator(Eigen::Index n) const;

    // newline-delimited decimal
    std::string serialize() const;
    static IntegerSet deserialize(const std::string& text, long ambient);
};

// True iff no three distinct elements satisfy a + c = 2b over the integers.
bool is_progression_free(const IntegerSet& set);

// Progression-free subset of [0, N) built from spheres in digit space; shell
// radius and digit base are chosen by grid search at run time.
IntegerSet behrend_set(long n);

// Exact maximum size of a progression-free subset of [0, N) by branch and
// bound. Guarded to N <= 32.
int max_ap_free_oracle(int n);

// Bernoulli(delta) sample of [0, N) under the seeded generator.
IntegerSet random_set(long n, double delta, std::uint64_t seed);

// Smallest prime >= x.
long next_prime_at_least(long x);

// Count of (x, r) pairs in Z_m^2 with x, x-r, x-2r all in the set; exact
// integer arithmetic. When m >= 2 max(E) + 1 this equals the integer count.
long long count_progressions_mod(const IntegerSet& set, long m);

// ---------------------------------------------------------------------------
// Self-similar measures
// ---------------------------------------------------------------------------

// One iterated-function-system axis: the maps x -> (x + a) / base for a in
// digits, picked with the given weights.
struct IfsAxis {
    int base = 3;
    std::vector<int> digits;
    std::vector<double> weights;

    double similarity_dimension() const;
    void validate() const;
};

// Product measure on [0,1]^d with one IFS per axis, plus the truncation depth
// used when evaluating its transform.
struct SelfSimilarMeasure {
    std::vector<IfsAxis> axes;
    int depth = 48;

    int dim() const { return static_cast<int>(axes.size()); }
    void validate() const;

    static SelfSimilarMeasure middle_thirds(int d = 1);
    static SelfSimilarMeasure full_digits(int base, int d = 1);  // Lebesgue limit

    // TOML-style key/value round trip
    std::string serialize() const;
    static SelfSimilarMeasure deserialize(const std::string& text);
};

// Transform of the measure at a real frequency vector: the per-axis product
//   prod_k sum_a w_a e^{-2 pi i xi a b^{-k}},  k = 1..depth.
// The tail beyond the truncation depth moves the value by at most
// 2 pi |xi| b^{-depth}.
Complex self_similar_fourier(const SelfSimilarMeasure& mu, const VectorXd& xi);
Complex self_similar_fourier(const SelfSimilarMeasure& mu, const VectorXd& xi, int depth);

// Per-axis factor at a scalar frequency (used for cached grid sweeps).
Complex ifs_axis_fourier(const IfsAxis& axis, double xi, int depth);

// Depth sufficient for a tail contribution below 1e-10 at frequency radius r.
int recommended_depth(const SelfSimilarMeasure& mu, double r);

// Grid realization: every level-`level` cell deposits its mass on the nearest
// grid cell, then the result is normalized to unit mass.
GridDensity discretize(const SelfSimilarMeasure& mu, Eigen::Index n, int level);

}  // namespace aplab

#endif
