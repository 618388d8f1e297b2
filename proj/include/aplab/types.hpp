#ifndef APLAB_TYPES_HPP
#define APLAB_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aplab {

using Complex = std::complex<double>;
using Eigen::ArrayXd;
using Eigen::ArrayXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr const char* kVersion = "aplab 0.1.0";

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Incompatible (d, N) between operands.
struct ShapeError : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// Grid cannot resolve the requested frequency content.
struct ResolutionError : Error {
    using Error::Error;
};

// A quadrature failed its own convergence test; carries both estimates.
struct QuadratureError : Error {
    double coarse = 0.0;
    double fine = 0.0;
    QuadratureError(const std::string& msg, double coarse_, double fine_)
        : Error(msg), coarse(coarse_), fine(fine_) {}
};

// A matrix required to act bijectively on the grid is singular mod N.
struct SingularMatrixError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Deterministic helpers
// ---------------------------------------------------------------------------

// Neumaier compensated accumulator. Summation order is the insertion order,
// so results are run-to-run identical.
class StableSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// SplitMix64; used to derive independent per-item seeds from a master seed.
inline std::uint64_t split_mix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    split_mix64(s);
    return split_mix64(s);
}

// Uniform double in [0,1) from a 64-bit word; avoids distribution objects so
// streams are identical across standard library implementations.
inline double to_unit_double(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Grid index bookkeeping
// ---------------------------------------------------------------------------

// Total number of grid points of Z_N^d.
inline Eigen::Index grid_size(int d, Eigen::Index n) {
    Eigen::Index total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    return total;
}

// Centered representative of a frequency index k in [0, N).
inline long centered_rep(long k, long n) {
    return (k <= (n - 1) / 2) ? k : k - n;
}

// Storage index of a (possibly negative) frequency component.
inline Eigen::Index wrap_index(long xi, long n) {
    long m = xi % n;
    if (m < 0) m += n;
    return m;
}

// Euclidean norm of the centered representative of a flat frequency index.
double centered_norm(Eigen::Index flat, int d, Eigen::Index n);

// Largest centered-representative norm on the grid (the Nyquist radius).
double nyquist_radius(int d, Eigen::Index n);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Real density on Z_N^d under the normalized counting measure: averages carry
// a 1/N^d factor, never raw sums. Values are immutable by convention once a
// density has been handed to an operation.
struct GridDensity {
    int d = 1;
    Eigen::Index n = 0;
    ArrayXd values;  // length N^d, row-major over axes

    GridDensity() = default;
    GridDensity(int d_, Eigen::Index n_) : d(d_), n(n_), values(ArrayXd::Zero(grid_size(d_, n_))) {
        validate_shape();
    }
    GridDensity(int d_, Eigen::Index n_, ArrayXd v) : d(d_), n(n_), values(std::move(v)) {
        validate_shape();
        if (values.size() != grid_size(d, n))
            throw ShapeError("GridDensity: value count does not match N^d");
    }

    Eigen::Index size() const { return values.size(); }

    // L1 mass under the normalized counting measure, accumulated in index
    // order so it is bit-for-bit reproducible.
    double mass() const {
        StableSum s;
        for (Eigen::Index i = 0; i < values.size(); ++i) s.add(values[i]);
        return s.value() / static_cast<double>(size());
    }

    double l2_norm() const {
        StableSum s;
        for (Eigen::Index i = 0; i < values.size(); ++i) s.add(values[i] * values[i]);
        return std::sqrt(s.value() / static_cast<double>(size()));
    }

    double max_abs() const { return values.size() ? values.abs().maxCoeff() : 0.0; }

private:
    void validate_shape() const {
        if (d < 1 || d > 3) throw InvalidArgument("GridDensity: dimension must be 1, 2 or 3");
        if (n < 1) throw InvalidArgument("GridDensity: side length must be positive");
    }
};

enum class SpectrumProvenance { ForwardTransform, Synthetic };

// Complex function on the dual grid. Frequencies are identified with their
// centered representatives {-floor(N/2), ..., ceil(N/2)-1}; storage is the
// usual DFT layout.
struct Spectrum {
    int d = 1;
    Eigen::Index n = 0;
    ArrayXcd coeffs;
    SpectrumProvenance provenance = SpectrumProvenance::Synthetic;

    Spectrum() = default;
    Spectrum(int d_, Eigen::Index n_)
        : d(d_), n(n_), coeffs(ArrayXcd::Zero(grid_size(d_, n_))) {}
    Spectrum(int d_, Eigen::Index n_, ArrayXcd c, SpectrumProvenance p)
        : d(d_), n(n_), coeffs(std::move(c)), provenance(p) {
        if (coeffs.size() != grid_size(d, n))
            throw ShapeError("Spectrum: coefficient count does not match N^d");
    }

    Eigen::Index size() const { return coeffs.size(); }

    // Coefficient at a centered frequency vector (size d).
    Complex at(const std::vector<long>& xi) const {
        if (static_cast<int>(xi.size()) != d) throw ShapeError("Spectrum::at: frequency arity mismatch");
        Eigen::Index flat = 0;
        for (int i = 0; i < d; ++i) flat = flat * n + wrap_index(xi[i], static_cast<long>(n));
        return coeffs[flat];
    }
};

inline void require_same_shape(const GridDensity& a, const GridDensity& b, const char* op) {
    if (a.d != b.d || a.n != b.n)
        throw ShapeError(std::string(op) + ": operands live on different grids");
}

}  // namespace aplab

#endif
