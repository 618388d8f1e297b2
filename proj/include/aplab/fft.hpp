#ifndef APLAB_FFT_HPP
#define APLAB_FFT_HPP

#include <complex>
#include <vector>

#include "aplab/types.hpp"

namespace aplab {

// Complex FFT plan for one transform length. Power-of-two lengths run a
// radix-2 Cooley-Tukey pass; every other length goes through Bluestein's
// chirp-z reduction onto a power-of-two grid, so any N (prime, 3^k, ...) is
// supported.
template <typename Scalar = double>
class FftPlan {
public:
    using C = std::complex<Scalar>;

    explicit FftPlan(Eigen::Index n);

    Eigen::Index length() const { return n_; }

    // In-place unnormalized transform: X[k] = sum_x x[x] e^{-2pi i kx/N}
    // (sign +1 gives the conjugate transform).
    void transform(C* data, int sign) const;

private:
    void radix2(C* data, int sign, const std::vector<C>& tw) const;

    Eigen::Index n_ = 0;
    bool pow2_ = false;
    std::vector<C> twiddle_;       // forward twiddles for the radix-2 grid
    // Bluestein workspace
    Eigen::Index m_ = 0;           // power-of-two >= 2N-1
    std::vector<C> chirp_;         // e^{-pi i k^2 / N}
    std::vector<C> chirp_fft_;     // FFT of the zero-padded conjugate chirp
    std::vector<C> tw_m_;
};

// Forward transform of a density: coeffs(xi) = N^{-d} sum_x f(x) e^{-2pi i xi.x/N}.
Spectrum dual_transform(const GridDensity& f);

// Exact inverse of dual_transform.
GridDensity inverse_transform(const Spectrum& spec);

// Unnormalized d-dimensional complex DFT used by both directions.
void dft_nd(ArrayXcd& data, int d, Eigen::Index n, int sign);

}  // namespace aplab

#endif
