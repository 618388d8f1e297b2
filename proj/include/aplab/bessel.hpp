#ifndef APLAB_BESSEL_HPP
#define APLAB_BESSEL_HPP

#include "aplab/types.hpp"

namespace aplab {

struct BesselSplit {
    double j = 0.0;  // J_{(d-2)/2}(r)
    double k = 0.0;  // J(r) - sqrt(2/(pi r)) cos(r - pi m / 2 - pi / 4)
};

// Bessel function of order (d-2)/2 together with the remainder beyond its
// leading oscillation. Power series below the seam r = 20, Hankel asymptotic
// above it; the two branches agree at the seam to 1e-10. Half-integer orders
// (d = 1, 3) evaluate in closed form and have K identically zero.
BesselSplit bessel_kernel(int d, double r);

double bessel_j(int d, double r);

}  // namespace aplab

#endif
