#ifndef APLAB_FOURIER_HPP
#define APLAB_FOURIER_HPP

#include <Eigen/Dense>
#include <complex>

#include "aplab/fft.hpp"
#include "aplab/types.hpp"

namespace aplab {

// Pair of integer matrices defining a two-parameter point configuration
// (x, x - M1 u, x - M2 u). M1 = I, M2 = 2I recovers three-term progressions.
struct ConfigurationMatrices {
    Eigen::MatrixXi m1;
    Eigen::MatrixXi m2;

    ConfigurationMatrices(Eigen::MatrixXi a, Eigen::MatrixXi b);
    int dim() const { return static_cast<int>(m1.rows()); }
};

// Normalized progression count
//   N^{-2d} sum_{x,r} f0(x) f1(x-r) f2(x-2r)
// with wraparound arithmetic. Quadratic in the grid size; kept as the ground
// truth oracle for every spectral computation.
double lambda3_direct(const GridDensity& f0, const GridDensity& f1, const GridDensity& f2);
double lambda3_direct(const GridDensity& f);

// Same functional through the dual side: sum_xi f0^(xi) f1^(-2xi) f2^(xi).
double lambda3_spectral(const GridDensity& f0, const GridDensity& f1, const GridDensity& f2);
double lambda3_spectral(const GridDensity& f);
double lambda3_spectral(const Spectrum& s0, const Spectrum& s1, const Spectrum& s2);

// (sum_xi |coeffs(xi)|^q)^{1/q}, optionally omitting xi = 0.
double lq_norm(const Spectrum& spec, double q, bool exclude_zero = false);

// Fourth root of the sum of fourth powers of the coefficients.
double u2_norm(const GridDensity& f);
double u2_norm(const Spectrum& spec);

// Contribution of the zero-step progressions of the normalized indicator
// 1_E / delta: delta^{-2} N^{-1} with delta = |E|/N.
double trivial_ap_contribution(Eigen::Index set_size, Eigen::Index n);

// Weighted configuration count
//   N^{-2d} sum_{x,u} g(u) f0(x) f1(x - M1 u) f2(x - M2 u)
// evaluated on the spatial side.
Complex configuration_count_direct(const GridDensity& f0, const GridDensity& f1,
                                   const GridDensity& f2, const ConfigurationMatrices& mats,
                                   const GridDensity& weight);

// The same count through the dual-side identity. Requires at least one of
// M1, M2 to act invertibly mod N; solves the frequency constraint through
// that matrix.
Complex configuration_count_dual(const GridDensity& f0, const GridDensity& f1,
                                 const GridDensity& f2, const ConfigurationMatrices& mats,
                                 const GridDensity& weight);

// Both routes, asserting agreement; returns the dual-side value.
Complex configuration_count(const GridDensity& f0, const GridDensity& f1, const GridDensity& f2,
                            const ConfigurationMatrices& mats, const GridDensity& weight,
                            double rel_tol = 1e-8);

}  // namespace aplab

#endif
