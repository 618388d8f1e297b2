#include "aplab/fourier.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace aplab {

namespace {

// index of (x - y) mod N componentwise, both given as flat indices
inline Eigen::Index sub_mod_flat_1d(Eigen::Index x, Eigen::Index y, Eigen::Index n) {
    Eigen::Index r = x - y;
    return r < 0 ? r + n : r;
}

long long egcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    long long x1, y1;
    long long g = egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

bool mod_inverse_scalar(long long a, long long n, long long& inv) {
    a %= n;
    if (a < 0) a += n;
    long long x, y;
    long long g = egcd(a, n, x, y);
    if (g != 1) return false;
    inv = ((x % n) + n) % n;
    return true;
}

long long det_int(const Eigen::MatrixXi& m) {
    const int d = static_cast<int>(m.rows());
    if (d == 1) return m(0, 0);
    if (d == 2)
        return static_cast<long long>(m(0, 0)) * m(1, 1) -
               static_cast<long long>(m(0, 1)) * m(1, 0);
    long long det = 0;
    for (int j = 0; j < 3; ++j) {
        long long a = m(0, j);
        long long b = static_cast<long long>(m(1, (j + 1) % 3)) * m(2, (j + 2) % 3) -
                      static_cast<long long>(m(1, (j + 2) % 3)) * m(2, (j + 1) % 3);
        det += a * b;
    }
    return det;
}

// adjugate of an integer matrix, d <= 3
Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> adjugate(const Eigen::MatrixXi& m) {
    const int d = static_cast<int>(m.rows());
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> adj(d, d);
    if (d == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    if (d == 2) {
        adj(0, 0) = m(1, 1);
        adj(0, 1) = -m(0, 1);
        adj(1, 0) = -m(1, 0);
        adj(1, 1) = m(0, 0);
        return adj;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            long long cof = static_cast<long long>(m(r0, c0)) * m(r1, c1) -
                            static_cast<long long>(m(r0, c1)) * m(r1, c0);
            adj(j, i) = cof;  // transpose of the cofactor matrix
        }
    return adj;
}

// (M^T)^{-1} mod N when it exists
bool mod_inverse_transpose(const Eigen::MatrixXi& m, long long n,
                           Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& out) {
    long long inv_det;
    if (!mod_inverse_scalar(det_int(m), n, inv_det)) return false;
    auto adj = adjugate(m);
    const int d = static_cast<int>(m.rows());
    out.resize(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            long long v = ((adj(j, i) % n) + n) % n;  // adj of transpose = adj^T
            out(i, j) = (v * inv_det) % n;
        }
    return true;
}

std::vector<long> flat_to_coords(Eigen::Index flat, int d, Eigen::Index n) {
    std::vector<long> c(d);
    for (int i = d - 1; i >= 0; --i) {
        c[i] = static_cast<long>(flat % n);
        flat /= n;
    }
    return c;
}

Eigen::Index coords_to_flat(const std::vector<long>& c, Eigen::Index n) {
    Eigen::Index flat = 0;
    for (long v : c) flat = flat * n + wrap_index(v, static_cast<long>(n));
    return flat;
}

std::vector<long> mat_vec_mod(const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& m,
                              const std::vector<long>& v, long long n) {
    const int d = static_cast<int>(m.rows());
    std::vector<long> out(d);
    for (int i = 0; i < d; ++i) {
        long long s = 0;
        for (int j = 0; j < d; ++j) s += m(i, j) * v[j];
        s %= n;
        if (s < 0) s += n;
        out[i] = static_cast<long>(s);
    }
    return out;
}

std::vector<long> mat_transpose_vec_mod(const Eigen::MatrixXi& m, const std::vector<long>& v,
                                        long long n) {
    const int d = static_cast<int>(m.rows());
    std::vector<long> out(d);
    for (int i = 0; i < d; ++i) {
        long long s = 0;
        for (int j = 0; j < d; ++j) s += static_cast<long long>(m(j, i)) * v[j];
        s %= n;
        if (s < 0) s += n;
        out[i] = static_cast<long>(s);
    }
    return out;
}

}  // namespace

ConfigurationMatrices::ConfigurationMatrices(Eigen::MatrixXi a, Eigen::MatrixXi b)
    : m1(std::move(a)), m2(std::move(b)) {
    if (m1.rows() != m1.cols() || m2.rows() != m2.cols() || m1.rows() != m2.rows())
        throw InvalidArgument("ConfigurationMatrices: matrices must be square and same size");
    if (m1.rows() < 1 || m1.rows() > 3)
        throw InvalidArgument("ConfigurationMatrices: dimension must be 1, 2 or 3");
    if (det_int(m1) == 0) throw InvalidArgument("ConfigurationMatrices: det(M1) = 0");
    if (det_int(m2) == 0) throw InvalidArgument("ConfigurationMatrices: det(M2) = 0");
    if (det_int((m2 - m1).eval()) == 0)
        throw InvalidArgument("ConfigurationMatrices: det(M2 - M1) = 0");
}

double lambda3_direct(const GridDensity& f0, const GridDensity& f1, const GridDensity& f2) {
    require_same_shape(f0, f1, "lambda3_direct");
    require_same_shape(f0, f2, "lambda3_direct");
    const Eigen::Index n = f0.n;
    StableSum outer;
    if (f0.d == 1) {
        const double* a = f0.values.data();
        const double* b = f1.values.data();
        const double* c = f2.values.data();
        for (Eigen::Index r = 0; r < n; ++r) {
            Eigen::Index i1 = sub_mod_flat_1d(0, r, n);
            Eigen::Index i2 = sub_mod_flat_1d(i1, r, n);
            double s = 0.0;
            for (Eigen::Index x = 0; x < n; ++x) {
                s += a[x] * b[i1] * c[i2];
                if (++i1 == n) i1 = 0;
                if (++i2 == n) i2 = 0;
            }
            outer.add(s);
        }
    } else if (f0.d == 2) {
        const double* a = f0.values.data();
        const double* b = f1.values.data();
        const double* c = f2.values.data();
        for (Eigen::Index r0 = 0; r0 < n; ++r0) {
            for (Eigen::Index r1 = 0; r1 < n; ++r1) {
                const Eigen::Index s11 = sub_mod_flat_1d(0, r1, n);
                const Eigen::Index s21 = sub_mod_flat_1d(s11, r1, n);
                double s = 0.0;
                for (Eigen::Index x0 = 0; x0 < n; ++x0) {
                    const Eigen::Index y0 = (x0 >= r0 ? x0 - r0 : x0 - r0 + n);
                    const Eigen::Index z0 = (y0 >= r0 ? y0 - r0 : y0 - r0 + n);
                    const double* arow = a + x0 * n;
                    const double* brow = b + y0 * n;
                    const double* crow = c + z0 * n;
                    Eigen::Index i1 = s11, i2 = s21;
                    for (Eigen::Index x1 = 0; x1 < n; ++x1) {
                        s += arow[x1] * brow[i1] * crow[i2];
                        if (++i1 == n) i1 = 0;
                        if (++i2 == n) i2 = 0;
                    }
                }
                outer.add(s);
            }
        }
    } else {
        // generic slow path
        const Eigen::Index total = f0.size();
        for (Eigen::Index rf = 0; rf < total; ++rf) {
            auto rc = flat_to_coords(rf, f0.d, n);
            double s = 0.0;
            for (Eigen::Index xf = 0; xf < total; ++xf) {
                auto xc = flat_to_coords(xf, f0.d, n);
                std::vector<long> y(f0.d), z(f0.d);
                for (int i = 0; i < f0.d; ++i) {
                    y[i] = xc[i] - rc[i];
                    z[i] = xc[i] - 2 * rc[i];
                }
                s += f0.values[xf] * f1.values[coords_to_flat(y, n)] *
                     f2.values[coords_to_flat(z, n)];
            }
            outer.add(s);
        }
    }
    const double scale = static_cast<double>(f0.size()) * static_cast<double>(f0.size());
    return outer.value() / scale;
}

double lambda3_direct(const GridDensity& f) { return lambda3_direct(f, f, f); }

double lambda3_spectral(const Spectrum& s0, const Spectrum& s1, const Spectrum& s2) {
    if (s0.d != s1.d || s0.d != s2.d || s0.n != s1.n || s0.n != s2.n)
        throw ShapeError("lambda3_spectral: spectra live on different grids");
    const Eigen::Index n = s0.n;
    const Eigen::Index total = s0.size();
    StableSum re;
    for (Eigen::Index flat = 0; flat < total; ++flat) {
        // flat index of -2 xi, componentwise mod N
        Eigen::Index rem = flat, idx = 0, stride = 1;
        for (int ax = 0; ax < s0.d; ++ax) {
            Eigen::Index coord = rem % n;
            rem /= n;
            idx += ((n - (2 * coord) % n) % n) * stride;
            stride *= n;
        }
        Complex term = s0.coeffs[flat] * s1.coeffs[idx] * s2.coeffs[flat];
        re.add(term.real());
    }
    return re.value();
}

double lambda3_spectral(const GridDensity& f0, const GridDensity& f1, const GridDensity& f2) {
    require_same_shape(f0, f1, "lambda3_spectral");
    require_same_shape(f0, f2, "lambda3_spectral");
    return lambda3_spectral(dual_transform(f0), dual_transform(f1), dual_transform(f2));
}

double lambda3_spectral(const GridDensity& f) {
    Spectrum s = dual_transform(f);
    return lambda3_spectral(s, s, s);
}

double lq_norm(const Spectrum& spec, double q, bool exclude_zero) {
    if (q < 1.0) throw InvalidArgument("lq_norm: q must be >= 1");
    StableSum s;
    for (Eigen::Index i = 0; i < spec.size(); ++i) {
        if (exclude_zero && i == 0) continue;
        s.add(std::pow(std::abs(spec.coeffs[i]), q));
    }
    return std::pow(s.value(), 1.0 / q);
}

double u2_norm(const Spectrum& spec) {
    StableSum s;
    for (Eigen::Index i = 0; i < spec.size(); ++i) {
        double a = std::norm(spec.coeffs[i]);
        s.add(a * a);
    }
    return std::pow(s.value(), 0.25);
}

double u2_norm(const GridDensity& f) { return u2_norm(dual_transform(f)); }

double trivial_ap_contribution(Eigen::Index set_size, Eigen::Index n) {
    if (set_size <= 0) throw InvalidArgument("trivial_ap_contribution: set is empty");
    if (set_size > n) throw InvalidArgument("trivial_ap_contribution: set larger than ambient grid");
    double s = static_cast<double>(set_size);
    return static_cast<double>(n) / (s * s);
}

Complex configuration_count_direct(const GridDensity& f0, const GridDensity& f1,
                                   const GridDensity& f2, const ConfigurationMatrices& mats,
                                   const GridDensity& weight) {
    require_same_shape(f0, f1, "configuration_count");
    require_same_shape(f0, f2, "configuration_count");
    require_same_shape(f0, weight, "configuration_count");
    if (mats.dim() != f0.d) throw ShapeError("configuration_count: matrix dimension mismatch");
    const Eigen::Index n = f0.n;
    const Eigen::Index total = f0.size();
    const int d = f0.d;
    StableSum acc;
    std::vector<long> m1u(d), m2u(d);
    for (Eigen::Index uf = 0; uf < total; ++uf) {
        const double g = weight.values[uf];
        if (g == 0.0) continue;
        auto uc = flat_to_coords(uf, d, n);
        for (int i = 0; i < d; ++i) {
            long long a = 0, b = 0;
            for (int j = 0; j < d; ++j) {
                a += static_cast<long long>(mats.m1(i, j)) * uc[j];
                b += static_cast<long long>(mats.m2(i, j)) * uc[j];
            }
            m1u[i] = static_cast<long>(((a % n) + n) % n);
            m2u[i] = static_cast<long>(((b % n) + n) % n);
        }
        double s = 0.0;
        if (d == 1) {
            Eigen::Index i1 = sub_mod_flat_1d(0, m1u[0], n);
            Eigen::Index i2 = sub_mod_flat_1d(0, m2u[0], n);
            for (Eigen::Index x = 0; x < n; ++x) {
                s += f0.values[x] * f1.values[i1] * f2.values[i2];
                if (++i1 == n) i1 = 0;
                if (++i2 == n) i2 = 0;
            }
        } else {
            for (Eigen::Index xf = 0; xf < total; ++xf) {
                auto xc = flat_to_coords(xf, d, n);
                std::vector<long> y(d), z(d);
                for (int i = 0; i < d; ++i) {
                    y[i] = xc[i] - m1u[i];
                    z[i] = xc[i] - m2u[i];
                }
                s += f0.values[xf] * f1.values[coords_to_flat(y, n)] *
                     f2.values[coords_to_flat(z, n)];
            }
        }
        acc.add(g * s);
    }
    const double scale = static_cast<double>(total) * static_cast<double>(total);
    return Complex(acc.value() / scale, 0.0);
}

Complex configuration_count_dual(const GridDensity& f0, const GridDensity& f1,
                                 const GridDensity& f2, const ConfigurationMatrices& mats,
                                 const GridDensity& weight) {
    require_same_shape(f0, f1, "configuration_count");
    require_same_shape(f0, f2, "configuration_count");
    require_same_shape(f0, weight, "configuration_count");
    if (mats.dim() != f0.d) throw ShapeError("configuration_count: matrix dimension mismatch");
    const Eigen::Index n = f0.n;
    const int d = f0.d;
    const Eigen::Index total = f0.size();

    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> inv;
    bool via_m2 = mod_inverse_transpose(mats.m2, n, inv);
    bool via_m1 = false;
    if (!via_m2) {
        via_m1 = mod_inverse_transpose(mats.m1, n, inv);
        if (!via_m1)
            throw SingularMatrixError(
                "configuration_count: neither M1 nor M2 is invertible mod N; "
                "the frequency constraint cannot be solved on this grid");
    }

    Spectrum s0 = dual_transform(f0);
    Spectrum s1 = dual_transform(f1);
    Spectrum s2 = dual_transform(f2);
    Spectrum gw = dual_transform(weight);

    const double gmax = gw.coeffs.abs().maxCoeff();
    const double skip = gmax * 1e-15;

    Complex acc(0.0, 0.0);
    for (Eigen::Index ef = 0; ef < total; ++ef) {
        const Complex gv = gw.coeffs[ef];
        if (std::abs(gv) <= skip) continue;
        auto eta = flat_to_coords(ef, d, n);
        Complex inner(0.0, 0.0);
        for (Eigen::Index ff = 0; ff < total; ++ff) {
            auto free = flat_to_coords(ff, d, n);
            std::vector<long> other(d);
            if (via_m2) {
                // free variable is xi1; xi2 = M2^{-T}(eta - M1^T xi1)
                auto m1t = mat_transpose_vec_mod(mats.m1, free, n);
                std::vector<long> rhs(d);
                for (int i = 0; i < d; ++i) rhs[i] = eta[i] - m1t[i];
                other = mat_vec_mod(inv, rhs, n);
            } else {
                // free variable is xi2; xi1 = M1^{-T}(eta - M2^T xi2)
                auto m2t = mat_transpose_vec_mod(mats.m2, free, n);
                std::vector<long> rhs(d);
                for (int i = 0; i < d; ++i) rhs[i] = eta[i] - m2t[i];
                other = mat_vec_mod(inv, rhs, n);
            }
            const std::vector<long>& xi1 = via_m2 ? free : other;
            const std::vector<long>& xi2 = via_m2 ? other : free;
            std::vector<long> xi0(d);
            for (int i = 0; i < d; ++i) xi0[i] = -(xi1[i] + xi2[i]);
            inner += s0.coeffs[coords_to_flat(xi0, n)] * s1.coeffs[coords_to_flat(xi1, n)] *
                     s2.coeffs[coords_to_flat(xi2, n)];
        }
        acc += gv * inner;
    }
    return acc;
}

Complex configuration_count(const GridDensity& f0, const GridDensity& f1, const GridDensity& f2,
                            const ConfigurationMatrices& mats, const GridDensity& weight,
                            double rel_tol) {
    Complex direct = configuration_count_direct(f0, f1, f2, mats, weight);
    Complex dual = configuration_count_dual(f0, f1, f2, mats, weight);
    double scale = std::max({1.0, std::abs(direct), std::abs(dual)});
    if (std::abs(direct - dual) > rel_tol * scale)
        throw Error("configuration_count: spatial and dual evaluations disagree beyond tolerance");
    return dual;
}

}  // namespace aplab
