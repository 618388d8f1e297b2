#include "aplab/bessel.hpp"

#include <cmath>
#include <limits>

namespace aplab {

namespace {

constexpr double kSeam = 20.0;

// J_0 by its power series; long double accumulation keeps the alternating
// cancellation below 1e-11 absolute out to the seam.
double j0_series(double x) {
    const long double q = -static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k <= 80; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::abs(static_cast<double>(term)) < 1e-22) break;
    }
    return static_cast<double>(sum);
}

// Hankel expansion for order zero: J_0 = sqrt(2/(pi x)) (P cos w - Q sin w),
// w = x - pi/4. Twelve correction coefficients hold the seam error near
// 1e-11.
double j0_asymptotic(double x) {
    double a[14];
    a[0] = 1.0;
    for (int j = 1; j < 14; ++j) {
        double odd = 2.0 * j - 1.0;
        a[j] = a[j - 1] * (-(odd * odd)) / (8.0 * j);
    }
    const double inv2 = 1.0 / (x * x);
    double p = 0.0, q = 0.0;
    double sign = 1.0;
    double xpow = 1.0;
    for (int k = 0; k <= 6; ++k) {
        p += sign * a[2 * k] * xpow;
        q += sign * a[2 * k + 1] * xpow / x;
        sign = -sign;
        xpow *= inv2;
    }
    const double w = x - kPi / 4.0;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(w) - q * std::sin(w));
}

}  // namespace

double bessel_j(int d, double r) {
    if (r < 0.0) throw InvalidArgument("bessel_j: argument must be nonnegative");
    switch (d) {
        case 1:  // order -1/2
            if (r == 0.0) return std::numeric_limits<double>::infinity();
            return std::sqrt(2.0 / (kPi * r)) * std::cos(r);
        case 2:  // order 0
            return (r <= kSeam) ? j0_series(r) : j0_asymptotic(r);
        case 3:  // order 1/2
            if (r == 0.0) return 0.0;
            return std::sqrt(2.0 / (kPi * r)) * std::sin(r);
        default:
            throw InvalidArgument("bessel_j: dimension must be 1, 2 or 3");
    }
}

BesselSplit bessel_kernel(int d, double r) {
    BesselSplit out;
    if (d == 1 || d == 3) {
        // half-integer order: the leading oscillation is the whole function
        out.j = bessel_j(d, r);
        out.k = 0.0;
        return out;
    }
    out.j = bessel_j(d, r);
    if (r == 0.0) {
        out.k = 0.0;  // remainder left at zero where the split is undefined
        return out;
    }
    const double m = (d - 2) / 2.0;
    out.k = out.j - std::sqrt(2.0 / (kPi * r)) * std::cos(r - kPi * m / 2.0 - kPi / 4.0);
    return out;
}

}  // namespace aplab
