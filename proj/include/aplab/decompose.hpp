#ifndef APLAB_DECOMPOSE_HPP
#define APLAB_DECOMPOSE_HPP

#include <functional>
#include <vector>

#include "aplab/fourier.hpp"
#include "aplab/types.hpp"

namespace aplab {

// ---------------------------------------------------------------------------
// Bohr sets
// ---------------------------------------------------------------------------

// Points of Z_N^d whose characters indexed by `freqs` stay eta-close to 1.
struct BohrSet {
    int d = 1;
    Eigen::Index n = 0;
    std::vector<std::vector<long>> freqs;  // centered representatives
    double eta = 2.0;
    std::vector<Eigen::Index> members;  // flat indices, ascending

    bool contains(Eigen::Index flat) const;
};

// Exact membership by evaluating |e^{2 pi i xi.x / N} - 1| <= eta for every
// xi in freqs. Always contains 0 and is symmetric under x -> -x.
BohrSet bohr_set(const std::vector<std::vector<long>>& freqs, double eta, Eigen::Index n, int d);

// ---------------------------------------------------------------------------
// Bohr-cut decomposition f = g + h
// ---------------------------------------------------------------------------

struct BohrCutResult {
    GridDensity g;  // nonnegative, same mass as f
    GridDensity h;  // signed remainder
    double lambda = 0.0;
    double eta = 0.0;
    double q = 0.0;  // exponent implied by the budget parameter T
    // diagnostics
    double g_hat_l2 = 0.0;
    double h_hat_l3 = 0.0;
    Eigen::Index level_set_size = 0;  // |E_lambda|
    Eigen::Index bohr_size = 0;       // |B|
    bool degenerate_bohr = false;     // B collapsed to {0}
    bool lq_hypothesis_ok = true;     // measured l^q norm of f within M_bound
    double mollifier_flatness = 0.0;  // max over E_lambda of |1 - phi^(xi)| / eta^2
};

// Smooths f by the normalized indicator of the Bohr set of its large spectrum.
// lambda = M_bound * eta with eta = (eps / M_bound)^T.
BohrCutResult bohr_cut(const GridDensity& f, double m_bound, double eps, double t_budget);

// ---------------------------------------------------------------------------
// Exponent threshold q(M, delta)
// ---------------------------------------------------------------------------

// Lower bound handle for the smoothed progression count of L2-normalized
// densities with mass at least t. Must be positive and nondecreasing on (0,1].
using C2Table = std::function<double(double)>;

// Piecewise-linear table backed by samples; the default is measured over a
// seeded corpus and frozen (see build_c2_table).
struct SampledC2Table {
    std::vector<double> t;  // ascending
    std::vector<double> value;
    double operator()(double arg) const;
};

// The frozen default table.
const SampledC2Table& default_c2_table();

// Threshold exponent
//   q = 2 + best over T in (1, T_max] of
//         min( 3 (1 - 1/T), C1 / (R^T ln(R^T)) ),  R = 1 / (C2 c(delta/M)),
// capped into (2, 3]. The budget T is optimized on a geometric grid with
// local refinement until the result is stable to 1e-6.
double q_threshold(double m, double delta, const C2Table& c2, double c1 = 1.0, double c2_const = 1.0);

// ---------------------------------------------------------------------------
// Truncation and spectral cutoff
// ---------------------------------------------------------------------------

struct TruncationResult {
    GridDensity low;   // min(f, K) with K = 3/eps
    GridDensity high;  // f - low
    double cutoff = 0.0;
    double high_l2 = 0.0;
    bool tail_bound_holds = false;  // ||high||_2 <= eps / sqrt(3)
};

// Height cutoff at K = 3/eps for densities with ||f||_2 <= 1.
TruncationResult truncate_l2(const GridDensity& f, double eps);

// Band limitation: multiplies the spectrum by a radial profile that is 1 on
// |xi| <= 2^{n-1}, 0 outside |xi| <= 2^n, and a raised cosine in between.
GridDensity spectral_truncate(const GridDensity& f, int level);

// The profile itself (exposed for tests).
double spectral_window(double radius, int level);

// ---------------------------------------------------------------------------
// Corpus sweep that produces a c2 table
// ---------------------------------------------------------------------------

struct C2BuildSettings {
    Eigen::Index n = 256;
    int corpus_size = 600;
    std::uint64_t seed = 2024;
};

// Lower envelope of the progression count over seeded densities with unit L2
// norm, tabulated against the L1 mass.
SampledC2Table build_c2_table(const C2BuildSettings& settings);

}  // namespace aplab

#endif
