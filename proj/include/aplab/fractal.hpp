#ifndef APLAB_FRACTAL_HPP
#define APLAB_FRACTAL_HPP

#include <functional>
#include <optional>
#include <vector>

#include "aplab/bessel.hpp"
#include "aplab/constructions.hpp"
#include "aplab/fourier.hpp"
#include "aplab/types.hpp"

namespace aplab {

// ---------------------------------------------------------------------------
// Measures seen through their transforms
// ---------------------------------------------------------------------------

// A measure exposed by its transform at arbitrary real frequencies. Product
// measures additionally expose per-axis factors so grid sweeps can cache one
// axis at a time; a mixture of such products covers every test measure used
// here.
struct FourierSource {
    int d = 1;
    std::function<Complex(const VectorXd&)> eval;
    // optional product structure: eval(xi) = sum_m coef[m] * prod_i axis[m][i](xi_i)
    std::vector<double> mixture_coef;
    std::vector<std::vector<std::function<Complex(double)>>> mixture_axes;

    bool separable() const { return !mixture_axes.empty(); }
    Complex operator()(const VectorXd& xi) const { return eval(xi); }
};

FourierSource make_source(const SelfSimilarMeasure& mu);
// exp(-2 pi^2 width^2 |xi|^2): the transform of an isotropic Gaussian mass.
FourierSource gaussian_source(int d, double width);
// Gaussian modulated by cosines at integer frequencies; mass renormalized.
FourierSource modulated_gaussian_source(int d, double width,
                                        const std::vector<std::pair<std::vector<long>, double>>& mods);
// Centered unit cube (sinc product).
FourierSource cube_source(int d);
// Radial profile (1 + |xi|)^{-gamma/2}; synthetic spectrum for decay tests.
FourierSource radial_profile_source(int d, double gamma);
// Comb of unit spikes at +-base^k with Gaussian background; adversarial.
FourierSource spike_comb_source(int d, int base, double background_width);
// Atomic measure carried by a grid density on the unit torus.
FourierSource grid_source(const GridDensity& f);

// ---------------------------------------------------------------------------
// Mollification
// ---------------------------------------------------------------------------

// Grid realization of the level-n smoothing of mu: the spectrum is windowed
// by the product triangle with per-axis support 2^n and inverted on Z_N^d.
// The kernel is nonnegative, so mollified measures stay nonnegative.
GridDensity mollify(const FourierSource& mu, Eigen::Index n, int level);

// Triangle window value at a frequency vector.
double fejer_window(const std::vector<double>& xi, int level);

// ---------------------------------------------------------------------------
// Energies and decay
// ---------------------------------------------------------------------------

struct EnergyReport {
    double alpha = 0.0;
    double value = 0.0;   // partial lattice sum at the cutoff
    double cutoff = 0.0;  // largest |xi| included
    double growth_exponent = 0.0;  // fitted slope of partial sums in log cutoff
};

// Partial sums of sum_xi |mu^(xi)|^2 max(|xi|,1)^{-(d-alpha)} over dyadic
// cutoffs, with the growth exponent fitted on the upper half.
EnergyReport energy(const FourierSource& mu, double alpha, double cutoff);

// Smallest admissible constant sup_{|xi|<=cutoff} |mu^(xi)| (1+|xi|)^{beta/2}.
double decay_constant(const FourierSource& mu, double beta, double cutoff);

// Largest beta on a 0.05 grid whose decay constant is stable under cutoff
// doubling, and the smallest q in [2,3] whose dyadic l^q blocks have died off.
double measured_beta(const FourierSource& mu, double cutoff);
std::optional<double> measured_q(const FourierSource& mu, double cutoff);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Spherical averages
// ---------------------------------------------------------------------------

struct SphericalAverageTable {
    int d = 1;
    std::vector<double> rho;
    std::vector<Complex> sigma;      // signed average
    std::vector<double> sigma_abs;   // average of the modulus
    int angular_nodes = 2;
    double freq_cutoff = 0.0;
    double step = 0.0;
};

struct SigmaOptions {
    double rho_max = 8.0;
    double rho_step = 0.1;
    double freq_cutoff = 8.0;
    double step = 0.125;
    int angular_nodes = 0;  // 0: pick by doubling until stable within 1%
    double richardson_tol = 0.01;
};

// Tensorized quadrature of the triple-product averages over (theta, eta).
// The half-step Richardson estimate rides along in the same pass; violation
// of the stability tolerance is an error carrying both aggregates.
SphericalAverageTable build_sigma_table(const FourierSource& mu, const SigmaOptions& opt);

// Weighted integral int r^{d-1-rho_exponent} Sigma(r) dr with dyadic-block
// tail monitoring (a trailing block above 10 percent flags divergence).
double weighted_sigma_integral(const SphericalAverageTable& table, double rho_exponent, int d);

// ---------------------------------------------------------------------------
// Step-length measures
// ---------------------------------------------------------------------------

struct APLengthMeasure {
    std::vector<double> bin_edges;  // ascending, covering [0, diam]
    std::vector<double> masses;     // one per bin
    int level = -1;                 // mollifier level when one was used
    double total_mass = 0.0;

    std::vector<double> centers() const;
    std::vector<double> densities() const;  // mass / width
};

// Deposits f(x) f(x-u) f(x-2u) / N^{2d} into the bin holding the wraparound
// length |u|. The bin totals sum to the direct progression count.
APLengthMeasure ap_length_measure(const GridDensity& f, const std::vector<double>& bin_edges);

std::vector<double> uniform_bins(int d, int count);
double torus_diameter(int d);

// Radial inversion of a sigma table:
//   C_d r^{d/2} int rho^{d/2} J(4 pi r rho) sigma(rho) drho.
// The 4 pi argument carries the transform convention; C_d is calibrated once
// per dimension against a Gaussian and then frozen.
double polar_ap_density(const SphericalAverageTable& table, double r, double c_d);

struct PolarCalibration {
    double c_d = 0.0;
    double rel_l1_gap = 0.0;  // residual gap on the calibration Gaussian
};

// One-time Gaussian calibration of the polar constant.
PolarCalibration calibrate_polar_constant(int d, Eigen::Index grid_n = 0);

// Direct-route densities sampled at bin centers inside [r_lo, r_hi].
struct DensityWindow {
    std::vector<double> r;
    std::vector<double> density;
};
DensityWindow direct_density_window(const GridDensity& f, int bins, double r_lo, double r_hi);

// ---------------------------------------------------------------------------
// The S + L decomposition
// ---------------------------------------------------------------------------

struct SLDecomposition {
    std::vector<double> s_grid;
    std::vector<double> frak_s;   // input samples
    std::vector<double> frak_S;   // s^{(d-1)/2} frak_s
    std::vector<double> r_grid;
    std::vector<double> frak_d;   // r^{d/2} int s^{d/2} J(rs) frak_s ds
    std::vector<double> frak_D;   // r^{-(d-1)/2} frak_d
    std::vector<double> s_part;   // oscillatory cosine/sine component
    std::vector<double> l_part;   // remainder through the K kernel
    std::vector<double> k_kernel; // K sampled on r_grid
    double norm_S = 0.0;
    double norm_frak_S = 0.0;
    double norm_L = 0.0;
    double energy_s = 0.0;  // int frak_s(r) r^{s-1} dr
};

SLDecomposition sl_decompose(const std::vector<double>& s_grid, const std::vector<double>& frak_s,
                             int d, double s_exponent, const std::vector<double>& r_grid);

}  // namespace aplab

#endif
