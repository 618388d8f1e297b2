#include "aplab/fft.hpp"

#include <cmath>

namespace aplab {

namespace {

bool is_pow2(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::Index next_pow2(Eigen::Index n) {
    Eigen::Index m = 1;
    while (m < n) m <<= 1;
    return m;
}

template <typename Scalar>
std::vector<std::complex<Scalar>> make_twiddles(Eigen::Index n) {
    std::vector<std::complex<Scalar>> tw(n / 2);
    for (Eigen::Index k = 0; k < n / 2; ++k) {
        long double ang = -2.0L * 3.14159265358979323846264338327950288L *
                          static_cast<long double>(k) / static_cast<long double>(n);
        tw[k] = std::complex<Scalar>(static_cast<Scalar>(std::cos(ang)),
                                     static_cast<Scalar>(std::sin(ang)));
    }
    return tw;
}

}  // namespace

template <typename Scalar>
FftPlan<Scalar>::FftPlan(Eigen::Index n) : n_(n) {
    if (n < 1) throw InvalidArgument("FftPlan: length must be positive");
    pow2_ = is_pow2(n);
    if (pow2_) {
        twiddle_ = make_twiddles<Scalar>(n);
        return;
    }
    m_ = next_pow2(2 * n - 1);
    tw_m_ = make_twiddles<Scalar>(m_);
    chirp_.resize(n);
    std::vector<C> b(m_, C(0, 0));
    for (Eigen::Index k = 0; k < n; ++k) {
        // k^2 mod 2N keeps the chirp angle exact for large N
        long long k2 = (static_cast<long long>(k) * k) % (2LL * n);
        long double ang = -3.14159265358979323846264338327950288L *
                          static_cast<long double>(k2) / static_cast<long double>(n);
        chirp_[k] = C(static_cast<Scalar>(std::cos(ang)), static_cast<Scalar>(std::sin(ang)));
        b[k] = std::conj(chirp_[k]);
        if (k > 0) b[m_ - k] = std::conj(chirp_[k]);
    }
    radix2(b.data(), -1, tw_m_);
    chirp_fft_ = std::move(b);
}

template <typename Scalar>
void FftPlan<Scalar>::radix2(C* a, int sign, const std::vector<C>& tw) const {
    const Eigen::Index n = static_cast<Eigen::Index>(tw.size()) * 2;
    if (n == 1) return;
    // bit-reversal permutation
    for (Eigen::Index i = 1, j = 0; i < n; ++i) {
        Eigen::Index bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (Eigen::Index len = 2; len <= n; len <<= 1) {
        const Eigen::Index step = n / len;
        for (Eigen::Index i = 0; i < n; i += len) {
            for (Eigen::Index k = 0; k < len / 2; ++k) {
                C w = tw[k * step];
                if (sign > 0) w = std::conj(w);
                C u = a[i + k];
                C v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

template <typename Scalar>
void FftPlan<Scalar>::transform(C* data, int sign) const {
    if (n_ == 1) return;
    if (pow2_) {
        radix2(data, sign, twiddle_);
        return;
    }
    // Bluestein: x[k] * chirp -> convolution with conjugate chirp -> * chirp
    std::vector<C> a(m_, C(0, 0));
    for (Eigen::Index k = 0; k < n_; ++k) {
        C c = (sign < 0) ? chirp_[k] : std::conj(chirp_[k]);
        a[k] = data[k] * c;
    }
    radix2(a.data(), -1, tw_m_);
    if (sign < 0) {
        for (Eigen::Index k = 0; k < m_; ++k) a[k] *= chirp_fft_[k];
    } else {
        for (Eigen::Index k = 0; k < m_; ++k) a[k] *= std::conj(chirp_fft_[k]);
    }
    radix2(a.data(), +1, tw_m_);
    const Scalar inv_m = Scalar(1) / static_cast<Scalar>(m_);
    for (Eigen::Index k = 0; k < n_; ++k) {
        C c = (sign < 0) ? chirp_[k] : std::conj(chirp_[k]);
        data[k] = a[k] * c * inv_m;
    }
}

template class FftPlan<double>;
template class FftPlan<float>;

void dft_nd(ArrayXcd& data, int d, Eigen::Index n, int sign) {
    FftPlan<double> plan(n);
    const Eigen::Index total = grid_size(d, n);
    if (data.size() != total) throw ShapeError("dft_nd: data size does not match N^d");
    if (d == 1) {
        plan.transform(data.data(), sign);
        return;
    }
    // row-column over each axis; strided lines gathered into a scratch buffer
    std::vector<Complex> line(n);
    Eigen::Index stride = 1;
    for (int axis = d - 1; axis >= 0; --axis) {
        const Eigen::Index lines = total / n;
        for (Eigen::Index l = 0; l < lines; ++l) {
            // decompose l into the index with the current axis removed
            Eigen::Index rem = l;
            Eigen::Index base = 0;
            Eigen::Index s = 1;
            for (int ax = d - 1; ax >= 0; --ax) {
                if (ax == axis) {
                    s *= n;
                    continue;
                }
                Eigen::Index coord = rem % n;
                rem /= n;
                base += coord * s;
                s *= n;
            }
            for (Eigen::Index k = 0; k < n; ++k) line[k] = data[base + k * stride];
            plan.transform(line.data(), sign);
            for (Eigen::Index k = 0; k < n; ++k) data[base + k * stride] = line[k];
        }
        stride *= n;
    }
}

Spectrum dual_transform(const GridDensity& f) {
    ArrayXcd buf(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) buf[i] = Complex(f.values[i], 0.0);
    dft_nd(buf, f.d, f.n, -1);
    buf /= static_cast<double>(f.size());
    return Spectrum(f.d, f.n, std::move(buf), SpectrumProvenance::ForwardTransform);
}

GridDensity inverse_transform(const Spectrum& spec) {
    ArrayXcd buf = spec.coeffs;
    dft_nd(buf, spec.d, spec.n, +1);
    GridDensity f(spec.d, spec.n);
    for (Eigen::Index i = 0; i < buf.size(); ++i) f.values[i] = buf[i].real();
    return f;
}

double centered_norm(Eigen::Index flat, int d, Eigen::Index n) {
    double s = 0.0;
    for (int i = d - 1; i >= 0; --i) {
        long coord = static_cast<long>(flat % n);
        flat /= n;
        double c = static_cast<double>(centered_rep(coord, static_cast<long>(n)));
        s += c * c;
    }
    return std::sqrt(s);
}

double nyquist_radius(int d, Eigen::Index n) {
    double per_axis = static_cast<double>(n / 2);
    return std::sqrt(static_cast<double>(d)) * per_axis;
}

}  // namespace aplab
