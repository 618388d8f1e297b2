#ifndef APLAB_TEST_ORACLES_HPP
#define APLAB_TEST_ORACLES_HPP

// Independent reference computations for the test suite. Everything here is
// deliberately naive (direct summation, exhaustive enumeration) and shares no
// code with the transforms it checks.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "aplab/types.hpp"

namespace oracle {

using aplab::Complex;
using aplab::GridDensity;

// Direct O(N^{2d}) evaluation of one Fourier coefficient.
inline Complex dft_coeff(const GridDensity& f, const std::vector<long>& xi) {
    const auto n = f.n;
    Complex acc(0, 0);
    for (Eigen::Index flat = 0; flat < f.size(); ++flat) {
        Eigen::Index rem = flat;
        double phase = 0.0;
        for (int i = f.d - 1; i >= 0; --i) {
            long coord = static_cast<long>(rem % n);
            rem /= n;
            phase += static_cast<double>(xi[i]) * static_cast<double>(coord);
        }
        double ang = -2.0 * aplab::kPi * phase / static_cast<double>(n);
        acc += f.values[flat] * Complex(std::cos(ang), std::sin(ang));
    }
    return acc / static_cast<double>(f.size());
}

// Exhaustive count of triples (x, r) with x, x-r, x-2r all in E (mod n).
inline long long count_3aps_mod(const std::vector<long>& set, long n) {
    std::vector<char> member(n, 0);
    for (long v : set) member[v] = 1;
    long long count = 0;
    for (long x = 0; x < n; ++x) {
        if (!member[x]) continue;
        for (long r = 0; r < n; ++r) {
            long y = ((x - r) % n + n) % n;
            long z = ((x - 2 * r) % n + n) % n;
            if (member[y] && member[z]) ++count;
        }
    }
    return count;
}

// Integer-arithmetic 3AP test over Z (no wraparound).
inline bool has_integer_3ap(const std::vector<long>& sorted_set) {
    std::vector<char> member;
    long maxv = sorted_set.empty() ? 0 : sorted_set.back();
    member.assign(maxv + 1, 0);
    for (long v : sorted_set) member[v] = 1;
    for (std::size_t i = 0; i < sorted_set.size(); ++i)
        for (std::size_t k = i + 1; k < sorted_set.size(); ++k) {
            long a = sorted_set[i], c = sorted_set[k];
            if ((a + c) % 2 == 0) {
                long b = (a + c) / 2;
                if (b != a && b != c && member[b]) return true;
            }
        }
    return false;
}

// U^2 norm through the physical-side autocorrelation average.
inline double u2_autocorrelation(const GridDensity& f) {
    const auto n = f.n;
    const double total = static_cast<double>(f.size());
    double acc = 0.0;
    if (f.d == 1) {
        for (Eigen::Index u = 0; u < n; ++u) {
            double corr = 0.0;
            for (Eigen::Index x = 0; x < n; ++x) {
                Eigen::Index y = x - u;
                if (y < 0) y += n;
                corr += f.values[x] * f.values[y];
            }
            corr /= total;
            acc += corr * corr;
        }
        acc /= total;
    } else {
        for (Eigen::Index u0 = 0; u0 < n; ++u0)
            for (Eigen::Index u1 = 0; u1 < n; ++u1) {
                double corr = 0.0;
                for (Eigen::Index x0 = 0; x0 < n; ++x0)
                    for (Eigen::Index x1 = 0; x1 < n; ++x1) {
                        Eigen::Index y0 = x0 - u0;
                        if (y0 < 0) y0 += n;
                        Eigen::Index y1 = x1 - u1;
                        if (y1 < 0) y1 += n;
                        corr += f.values[x0 * n + x1] * f.values[y0 * n + y1];
                    }
                corr /= total;
                acc += corr * corr;
            }
        acc /= total;
    }
    return std::pow(acc, 0.25);
}

// Exhaustive maximum progression-free subset size by depth-first search.
inline int max_ap_free_exhaustive(int n) {
    std::vector<int> chosen;
    int best = 0;
    auto extends = [&](int c) {
        for (std::size_t i = 0; i < chosen.size(); ++i)
            for (std::size_t j = i + 1; j < chosen.size(); ++j) {
                int a = chosen[i], b = chosen[j];
                if (b - a == c - b) return false;
                if ((a + c) % 2 == 0 && (a + c) / 2 == b) return false;
                if (a + c == 2 * b) return false;
            }
        return true;
    };
    std::function<void(int)> rec = [&](int next) {
        best = std::max(best, static_cast<int>(chosen.size()));
        if (static_cast<int>(chosen.size()) + (n - next) <= best) return;
        for (int c = next; c < n; ++c) {
            if (!extends(c)) continue;
            chosen.push_back(c);
            rec(c + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return best;
}

// Seeded nonnegative density; `spikiness` shapes the value distribution.
inline GridDensity random_density(int d, Eigen::Index n, std::uint64_t seed,
                                  double spikiness = 1.0) {
    GridDensity f(d, n);
    std::uint64_t state = seed;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        double u = aplab::to_unit_double(aplab::split_mix64(state));
        f.values[i] = std::pow(u, spikiness);
    }
    return f;
}

}  // namespace oracle

#endif
