#include "aplab/fractal.hpp"

#include <algorithm>
#include <cmath>

#include "aplab/fft.hpp"

namespace aplab {

namespace {

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

}  // namespace

// ---------------------------------------------------------------------------
// Sources
// ---------------------------------------------------------------------------

FourierSource make_source(const SelfSimilarMeasure& mu) {
    mu.validate();
    FourierSource src;
    src.d = mu.dim();
    src.mixture_coef = {1.0};
    std::vector<std::function<Complex(double)>> axes;
    for (int i = 0; i < mu.dim(); ++i) {
        IfsAxis axis = mu.axes[i];
        int min_depth = mu.depth;
        axes.push_back([axis, min_depth](double t) {
            double log_b = std::log2(static_cast<double>(axis.base));
            int depth = static_cast<int>(
                std::ceil(std::log2(std::max(2.0, std::abs(t))) / log_b + 40.0 / log_b));
            return ifs_axis_fourier(axis, t, std::max(min_depth, depth));
        });
    }
    src.mixture_axes = {axes};
    auto mixture = src;  // capture by value for the vector form
    src.eval = [mixture](const VectorXd& xi) {
        Complex out(0, 0);
        for (std::size_t m = 0; m < mixture.mixture_coef.size(); ++m) {
            Complex prod(mixture.mixture_coef[m], 0.0);
            for (int i = 0; i < mixture.d; ++i) prod *= mixture.mixture_axes[m][i](xi[i]);
            out += prod;
        }
        return out;
    };
    return src;
}

namespace {

FourierSource from_mixture(int d, std::vector<double> coef,
                           std::vector<std::vector<std::function<Complex(double)>>> axes) {
    FourierSource src;
    src.d = d;
    src.mixture_coef = std::move(coef);
    src.mixture_axes = std::move(axes);
    auto coef_copy = src.mixture_coef;
    auto axes_copy = src.mixture_axes;
    src.eval = [d, coef_copy, axes_copy](const VectorXd& xi) {
        Complex out(0, 0);
        for (std::size_t m = 0; m < coef_copy.size(); ++m) {
            Complex prod(coef_copy[m], 0.0);
            for (int i = 0; i < d; ++i) prod *= axes_copy[m][i](xi[i]);
            out += prod;
        }
        return out;
    };
    return src;
}

}  // namespace

FourierSource gaussian_source(int d, double width) {
    if (width <= 0.0) throw InvalidArgument("gaussian_source: width must be positive");
    const double c = 2.0 * kPi * kPi * width * width;
    std::vector<std::function<Complex(double)>> axes(
        d, [c](double t) { return Complex(std::exp(-c * t * t), 0.0); });
    return from_mixture(d, {1.0}, {axes});
}

FourierSource modulated_gaussian_source(
    int d, double width, const std::vector<std::pair<std::vector<long>, double>>& mods) {
    const double c = 2.0 * kPi * kPi * width * width;
    auto shifted = [c](double shift) {
        return std::function<Complex(double)>([c, shift](double t) {
            double u = t - shift;
            return Complex(std::exp(-c * u * u), 0.0);
        });
    };
    std::vector<double> coef = {1.0};
    std::vector<std::vector<std::function<Complex(double)>>> axes;
    std::vector<std::function<Complex(double)>> base;
    for (int i = 0; i < d; ++i) base.push_back(shifted(0.0));
    axes.push_back(base);
    for (const auto& [j, a] : mods) {
        if (static_cast<int>(j.size()) != d)
            throw ShapeError("modulated_gaussian_source: modulation arity mismatch");
        for (double sign : {1.0, -1.0}) {
            std::vector<std::function<Complex(double)>> comp;
            for (int i = 0; i < d; ++i) comp.push_back(shifted(sign * j[i]));
            axes.push_back(comp);
            coef.push_back(a / 2.0);
        }
    }
    FourierSource raw = from_mixture(d, coef, axes);
    VectorXd zero = VectorXd::Zero(d);
    double mass = raw.eval(zero).real();
    if (mass <= 0.0) throw InvalidArgument("modulated_gaussian_source: nonpositive mass");
    for (auto& cc : raw.mixture_coef) cc /= mass;
    return from_mixture(d, raw.mixture_coef, raw.mixture_axes);
}

FourierSource cube_source(int d) {
    std::vector<std::function<Complex(double)>> axes(
        d, [](double t) { return Complex(sinc(kPi * t), 0.0); });
    return from_mixture(d, {1.0}, {axes});
}

FourierSource radial_profile_source(int d, double gamma) {
    FourierSource src;
    src.d = d;
    src.eval = [gamma](const VectorXd& xi) {
        return Complex(std::pow(1.0 + xi.norm(), -gamma / 2.0), 0.0);
    };
    if (d == 1) {
        src.mixture_coef = {1.0};
        src.mixture_axes = {{[gamma](double t) {
            return Complex(std::pow(1.0 + std::abs(t), -gamma / 2.0), 0.0);
        }}};
    }
    return src;
}

FourierSource spike_comb_source(int d, int base, double background_width) {
    if (d != 1) throw InvalidArgument("spike_comb_source: one-dimensional only");
    const double c = 2.0 * kPi * kPi * background_width * background_width;
    const int b = base;
    std::vector<std::function<Complex(double)>> axes = {[c, b](double t) {
        double v = std::exp(-c * t * t);
        double a = std::abs(t);
        double spike = 1.0;
        for (int k = 0; k < 14; ++k) {
            double u = a - spike;
            v = std::max(v, 0.9 * std::exp(-u * u * 8.0));
            spike *= b;
            if (spike > 2.0 * a + 2.0) break;
        }
        return Complex(v, 0.0);
    }};
    return from_mixture(1, {1.0}, {axes});
}

FourierSource grid_source(const GridDensity& f) {
    FourierSource src;
    src.d = f.d;
    GridDensity copy = f;
    src.eval = [copy](const VectorXd& xi) {
        const Eigen::Index n = copy.n;
        Complex acc(0, 0);
        for (Eigen::Index flat = 0; flat < copy.size(); ++flat) {
            Eigen::Index rem = flat;
            double phase = 0.0;
            for (int i = copy.d - 1; i >= 0; --i) {
                phase += xi[i] * static_cast<double>(rem % n);
                rem /= n;
            }
            double ang = -2.0 * kPi * phase / static_cast<double>(n);
            acc += copy.values[flat] * Complex(std::cos(ang), std::sin(ang));
        }
        return acc / static_cast<double>(copy.size());
    };
    if (f.d == 1) {
        src.mixture_coef = {1.0};
        GridDensity c1 = f;
        src.mixture_axes = {{[c1](double t) {
            Complex acc(0, 0);
            for (Eigen::Index x = 0; x < c1.n; ++x) {
                double ang = -2.0 * kPi * t * static_cast<double>(x) / static_cast<double>(c1.n);
                acc += c1.values[x] * Complex(std::cos(ang), std::sin(ang));
            }
            return acc / static_cast<double>(c1.n);
        }}};
    }
    return src;
}

// ---------------------------------------------------------------------------
// Mollification
// ---------------------------------------------------------------------------

double fejer_window(const std::vector<double>& xi, int level) {
    const double support = std::pow(2.0, level);
    double w = 1.0;
    for (double c : xi) w *= std::max(0.0, 1.0 - std::abs(c) / support);
    return w;
}

GridDensity mollify(const FourierSource& mu, Eigen::Index n, int level) {
    if (level < 0) throw InvalidArgument("mollify: level must be nonnegative");
    const long support = static_cast<long>(std::pow(2.0, level));
    if (support > n / 2)
        throw ResolutionError("mollify: kernel support 2^" + std::to_string(level) +
                              " exceeds the grid Nyquist radius");
    const int d = mu.d;
    Spectrum coeffs(d, n);

    const long lo = -(support - 1), hi = support - 1;
    const long width = hi - lo + 1;
    if (mu.separable()) {
        const std::size_t m_count = mu.mixture_coef.size();
        // per-axis tables over the window
        std::vector<std::vector<std::vector<Complex>>> table(m_count);
        for (std::size_t m = 0; m < m_count; ++m) {
            table[m].resize(d);
            for (int i = 0; i < d; ++i) {
                table[m][i].resize(width);
                for (long k = 0; k < width; ++k)
                    table[m][i][k] = mu.mixture_axes[m][i](static_cast<double>(lo + k));
            }
        }
        if (d == 1) {
            for (long a = lo; a <= hi; ++a) {
                Complex v(0, 0);
                for (std::size_t m = 0; m < m_count; ++m)
                    v += mu.mixture_coef[m] * table[m][0][a - lo];
                coeffs.coeffs[wrap_index(a, n)] =
                    v * fejer_window({static_cast<double>(a)}, level);
            }
        } else {
            for (long a = lo; a <= hi; ++a)
                for (long b = lo; b <= hi; ++b) {
                    Complex v(0, 0);
                    for (std::size_t m = 0; m < m_count; ++m)
                        v += mu.mixture_coef[m] * table[m][0][a - lo] * table[m][1][b - lo];
                    double w =
                        fejer_window({static_cast<double>(a), static_cast<double>(b)}, level);
                    coeffs.coeffs[wrap_index(a, n) * n + wrap_index(b, n)] = v * w;
                }
        }
    } else {
        if (d == 1) {
            VectorXd xi(1);
            for (long a = lo; a <= hi; ++a) {
                xi[0] = static_cast<double>(a);
                coeffs.coeffs[wrap_index(a, n)] =
                    mu.eval(xi) * fejer_window({xi[0]}, level);
            }
        } else {
            VectorXd xi(2);
            for (long a = lo; a <= hi; ++a)
                for (long b = lo; b <= hi; ++b) {
                    xi[0] = static_cast<double>(a);
                    xi[1] = static_cast<double>(b);
                    coeffs.coeffs[wrap_index(a, n) * n + wrap_index(b, n)] =
                        mu.eval(xi) * fejer_window({xi[0], xi[1]}, level);
                }
        }
    }
    return inverse_transform(coeffs);
}

// ---------------------------------------------------------------------------
// Energies, decay, measured exponents
// ---------------------------------------------------------------------------

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("fit_slope: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0.0) throw InvalidArgument("fit_slope: degenerate abscissae");
    return num / den;
}

namespace {

// |mu^| sampled on the integer lattice ball |xi| <= cutoff, with radii
std::vector<std::pair<double, double>> lattice_samples(const FourierSource& mu, double cutoff) {
    std::vector<std::pair<double, double>> out;
    const long c = static_cast<long>(std::floor(cutoff));
    if (mu.d == 1) {
        std::vector<Complex> axis(2 * c + 1);
        if (mu.separable()) {
            for (long k = -c; k <= c; ++k) {
                Complex v(0, 0);
                for (std::size_t m = 0; m < mu.mixture_coef.size(); ++m)
                    v += mu.mixture_coef[m] * mu.mixture_axes[m][0](static_cast<double>(k));
                axis[k + c] = v;
            }
        } else {
            VectorXd xi(1);
            for (long k = -c; k <= c; ++k) {
                xi[0] = static_cast<double>(k);
                axis[k + c] = mu.eval(xi);
            }
        }
        out.reserve(2 * c + 1);
        for (long k = -c; k <= c; ++k)
            out.emplace_back(std::abs(static_cast<double>(k)), std::abs(axis[k + c]));
        return out;
    }
    // d == 2
    const std::size_t m_count = mu.mixture_coef.size();
    std::vector<std::vector<Complex>> ax0(m_count), ax1(m_count);
    if (mu.separable()) {
        for (std::size_t m = 0; m < m_count; ++m) {
            ax0[m].resize(2 * c + 1);
            ax1[m].resize(2 * c + 1);
            for (long k = -c; k <= c; ++k) {
                ax0[m][k + c] = mu.mixture_axes[m][0](static_cast<double>(k));
                ax1[m][k + c] = mu.mixture_axes[m][1](static_cast<double>(k));
            }
        }
    }
    out.reserve(static_cast<std::size_t>((2 * c + 1)) * (2 * c + 1));
    VectorXd xi(2);
    for (long a = -c; a <= c; ++a)
        for (long b = -c; b <= c; ++b) {
            double r = std::hypot(static_cast<double>(a), static_cast<double>(b));
            if (r > cutoff) continue;
            Complex v(0, 0);
            if (mu.separable()) {
                for (std::size_t m = 0; m < m_count; ++m)
                    v += mu.mixture_coef[m] * ax0[m][a + c] * ax1[m][b + c];
            } else {
                xi[0] = static_cast<double>(a);
                xi[1] = static_cast<double>(b);
                v = mu.eval(xi);
            }
            out.emplace_back(r, std::abs(v));
        }
    return out;
}

}  // namespace

EnergyReport energy(const FourierSource& mu, double alpha, double cutoff) {
    if (alpha <= 0.0 || alpha >= static_cast<double>(mu.d) + 1e-12)
        throw InvalidArgument("energy: alpha must lie in (0, d)");
    if (cutoff < 2.0) throw InvalidArgument("energy: cutoff too small");
    auto samples = lattice_samples(mu, cutoff);
    const double exponent = -(static_cast<double>(mu.d) - alpha);

    std::vector<double> cuts;
    for (double c = 2.0; c <= cutoff + 1e-9; c *= 2.0) cuts.push_back(c);
    std::vector<double> partial(cuts.size(), 0.0);
    for (const auto& [r, a] : samples) {
        double term = a * a * std::pow(std::max(r, 1.0), exponent);
        for (std::size_t k = 0; k < cuts.size(); ++k)
            if (r <= cuts[k]) partial[k] += term;
    }
    EnergyReport rep;
    rep.alpha = alpha;
    rep.cutoff = cuts.back();
    rep.value = partial.back();
    std::vector<double> xs, ys;
    for (std::size_t k = cuts.size() / 2; k < cuts.size(); ++k) {
        xs.push_back(std::log2(cuts[k]));
        ys.push_back(std::log2(std::max(partial[k], 1e-300)));
    }
    rep.growth_exponent = (xs.size() >= 2) ? std::max(0.0, fit_slope(xs, ys)) : 0.0;
    return rep;
}

double decay_constant(const FourierSource& mu, double beta, double cutoff) {
    if (beta < 0.0) throw InvalidArgument("decay_constant: beta must be nonnegative");
    auto samples = lattice_samples(mu, cutoff);
    double sup = 0.0;
    for (const auto& [r, a] : samples) sup = std::max(sup, a * std::pow(1.0 + r, beta / 2.0));
    return sup;
}

double measured_beta(const FourierSource& mu, double cutoff) {
    auto samples = lattice_samples(mu, cutoff);
    auto sup_at = [&](double beta, double cut) {
        double s = 0.0;
        for (const auto& [r, a] : samples)
            if (r <= cut) s = std::max(s, a * std::pow(1.0 + r, beta / 2.0));
        return s;
    };
    double best = 0.0;
    for (double beta = 0.05; beta <= 3.0 + 1e-9; beta += 0.05) {
        double c4 = sup_at(beta, cutoff / 4.0);
        double c2 = sup_at(beta, cutoff / 2.0);
        double c1 = sup_at(beta, cutoff);
        if (c1 <= 1.02 * c2 && c2 <= 1.02 * c4)
            best = beta;
    }
    return best;
}

std::optional<double> measured_q(const FourierSource& mu, double cutoff) {
    auto samples = lattice_samples(mu, cutoff);
    const int blocks = static_cast<int>(std::floor(std::log2(cutoff)));
    for (double q = 2.0; q <= 3.0 + 1e-9; q += 0.1) {
        std::vector<double> block(blocks + 1, 0.0);
        double head = 0.0;
        for (const auto& [r, a] : samples) {
            double term = std::pow(a, q);
            if (r < 1.0)
                head += term;
            else {
                int j = std::min(blocks, static_cast<int>(std::floor(std::log2(r))));
                block[j] += term;
            }
        }
        double total = head;
        bool ok = true;
        for (int j = 0; j <= blocks; ++j) {
            total += block[j];
            if (j == blocks && total > 0.0 && block[j] > 0.10 * total) ok = false;
        }
        if (ok) return q;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Spherical averages
// ---------------------------------------------------------------------------

namespace {

// assemble mu^(eta + shift) over the whole eta grid from per-axis tables
void fill_shifted(const FourierSource& mu, const std::vector<double>& pts,
                  const std::vector<double>& shift, ArrayXcd& out) {
    const int d = mu.d;
    const Eigen::Index m = static_cast<Eigen::Index>(pts.size());
    if (mu.separable()) {
        const std::size_t mc = mu.mixture_coef.size();
        if (d == 1) {
            out.setZero();
            for (std::size_t c = 0; c < mc; ++c)
                for (Eigen::Index i = 0; i < m; ++i)
                    out[i] += mu.mixture_coef[c] * mu.mixture_axes[c][0](pts[i] + shift[0]);
            return;
        }
        out.setZero();
        std::vector<Complex> a0(m), a1(m);
        for (std::size_t c = 0; c < mc; ++c) {
            for (Eigen::Index i = 0; i < m; ++i) {
                a0[i] = mu.mixture_axes[c][0](pts[i] + shift[0]);
                a1[i] = mu.mixture_axes[c][1](pts[i] + shift[1]);
            }
            for (Eigen::Index i = 0; i < m; ++i) {
                const Complex base = mu.mixture_coef[c] * a0[i];
                for (Eigen::Index j = 0; j < m; ++j) out[i * m + j] += base * a1[j];
            }
        }
        return;
    }
    VectorXd xi(d);
    if (d == 1) {
        for (Eigen::Index i = 0; i < m; ++i) {
            xi[0] = pts[i] + shift[0];
            out[i] = mu.eval(xi);
        }
        return;
    }
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            xi[0] = pts[i] + shift[0];
            xi[1] = pts[j] + shift[1];
            out[i * m + j] = mu.eval(xi);
        }
}

struct SigmaPass {
    std::vector<Complex> sigma;
    std::vector<double> sigma_abs;
    double total_abs_fine = 0.0;
    double total_abs_half_eta = 0.0;
    double total_abs_half_theta = 0.0;
};

SigmaPass sigma_pass(const FourierSource& mu, const SigmaOptions& opt,
                     const std::vector<double>& rho, int angular) {
    const int d = mu.d;
    const Eigen::Index half = static_cast<Eigen::Index>(std::round(opt.freq_cutoff / opt.step));
    const Eigen::Index m = 2 * half + 1;  // odd: even-index subgrid has double spacing
    std::vector<double> pts(m);
    for (Eigen::Index i = 0; i < m; ++i)
        pts[i] = (static_cast<double>(i) - static_cast<double>(half)) * opt.step;

    const Eigen::Index cells = (d == 1) ? m : m * m;
    ArrayXcd doubled(cells), minus(cells), plus(cells);
    // mu^(2 eta) cached once
    {
        ArrayXcd tmp(cells);
        if (d == 1) {
            for (Eigen::Index i = 0; i < m; ++i) {
                const double two = 2.0 * pts[i];
                if (mu.separable()) {
                    Complex v(0, 0);
                    for (std::size_t c = 0; c < mu.mixture_coef.size(); ++c)
                        v += mu.mixture_coef[c] * mu.mixture_axes[c][0](two);
                    tmp[i] = v;
                } else {
                    VectorXd xi(1);
                    xi[0] = two;
                    tmp[i] = mu.eval(xi);
                }
            }
        } else {
            if (mu.separable()) {
                const std::size_t mc = mu.mixture_coef.size();
                tmp.setZero();
                std::vector<Complex> a0(m), a1(m);
                for (std::size_t c = 0; c < mc; ++c) {
                    for (Eigen::Index i = 0; i < m; ++i) {
                        a0[i] = mu.mixture_axes[c][0](2.0 * pts[i]);
                        a1[i] = mu.mixture_axes[c][1](2.0 * pts[i]);
                    }
                    for (Eigen::Index i = 0; i < m; ++i) {
                        const Complex base = mu.mixture_coef[c] * a0[i];
                        for (Eigen::Index j = 0; j < m; ++j) tmp[i * m + j] += base * a1[j];
                    }
                }
            } else {
                VectorXd xi(2);
                for (Eigen::Index i = 0; i < m; ++i)
                    for (Eigen::Index j = 0; j < m; ++j) {
                        xi[0] = 2.0 * pts[i];
                        xi[1] = 2.0 * pts[j];
                        tmp[i * m + j] = mu.eval(xi);
                    }
            }
        }
        doubled = tmp;
    }

    const double cell_weight = (d == 1) ? opt.step : opt.step * opt.step;
    const double cutoff2 = opt.freq_cutoff * opt.freq_cutoff;

    SigmaPass pass;
    pass.sigma.assign(rho.size(), Complex(0, 0));
    pass.sigma_abs.assign(rho.size(), 0.0);

    const int thetas = (d == 1) ? 2 : angular;
    for (int t = 0; t < thetas; ++t) {
        std::vector<double> dir(d);
        double theta_weight;
        if (d == 1) {
            dir[0] = (t == 0) ? 1.0 : -1.0;
            theta_weight = 1.0;  // counting measure on the two-point sphere
        } else {
            double ang = 2.0 * kPi * t / thetas;
            dir[0] = std::cos(ang);
            dir[1] = std::sin(ang);
            theta_weight = 2.0 * kPi / thetas;
        }
        const bool theta_even = (t % 2 == 0);
        for (std::size_t k = 0; k < rho.size(); ++k) {
            std::vector<double> shift_minus(d), shift_plus(d);
            for (int i = 0; i < d; ++i) {
                shift_minus[i] = -rho[k] * dir[i];
                shift_plus[i] = rho[k] * dir[i];
            }
            fill_shifted(mu, pts, shift_minus, minus);
            fill_shifted(mu, pts, shift_plus, plus);
            Complex acc(0, 0);
            double acc_abs = 0.0;
            double acc_abs_half = 0.0;
            if (d == 1) {
                for (Eigen::Index i = 0; i < m; ++i) {
                    Complex term = doubled[i] * minus[i] * std::conj(plus[i]);
                    acc += term;
                    double a = std::abs(term);
                    acc_abs += a;
                    if (i % 2 == 0) acc_abs_half += a;
                }
            } else {
                for (Eigen::Index i = 0; i < m; ++i) {
                    const double e0 = pts[i];
                    for (Eigen::Index j = 0; j < m; ++j) {
                        const double e1 = pts[j];
                        if (e0 * e0 + e1 * e1 > cutoff2) continue;
                        Complex term =
                            doubled[i * m + j] * minus[i * m + j] * std::conj(plus[i * m + j]);
                        acc += term;
                        double a = std::abs(term);
                        acc_abs += a;
                        if (i % 2 == 0 && j % 2 == 0) acc_abs_half += a;
                    }
                }
            }
            const double w = theta_weight * cell_weight;
            pass.sigma[k] += acc * w;
            pass.sigma_abs[k] += acc_abs * w;
            pass.total_abs_fine += acc_abs * w;
            pass.total_abs_half_eta += acc_abs_half * theta_weight * cell_weight * std::pow(2.0, d);
            if (theta_even) pass.total_abs_half_theta += acc_abs * 2.0 * w;
        }
    }
    return pass;
}

}  // namespace

SphericalAverageTable build_sigma_table(const FourierSource& mu, const SigmaOptions& opt) {
    if (mu.d != 1 && mu.d != 2)
        throw InvalidArgument("build_sigma_table: dimension must be 1 or 2");
    if (opt.rho_step <= 0.0 || opt.step <= 0.0 || opt.freq_cutoff <= 0.0)
        throw InvalidArgument("build_sigma_table: grids must be positive");

    std::vector<double> rho;
    for (double r = opt.rho_step; r <= opt.rho_max + 1e-12; r += opt.rho_step) rho.push_back(r);

    int angular = (opt.angular_nodes > 0) ? opt.angular_nodes : 16;
    SigmaPass pass;
    for (;;) {
        pass = sigma_pass(mu, opt, rho, angular);
        if (mu.d == 1 || opt.angular_nodes > 0) break;
        double scale = std::max(pass.total_abs_fine, 1e-12);
        if (std::abs(pass.total_abs_fine - pass.total_abs_half_theta) <= opt.richardson_tol * scale)
            break;
        if (angular >= 256)
            throw QuadratureError("build_sigma_table: angular quadrature failed to stabilize",
                                  pass.total_abs_half_theta, pass.total_abs_fine);
        angular *= 2;
    }
    // halving the eta step must not move the aggregate by more than the tolerance
    double scale = std::max({pass.total_abs_fine, pass.total_abs_half_eta, 1e-12});
    if (std::abs(pass.total_abs_fine - pass.total_abs_half_eta) > opt.richardson_tol * scale)
        throw QuadratureError("build_sigma_table: eta quadrature not converged; halve the step",
                              pass.total_abs_half_eta, pass.total_abs_fine);

    SphericalAverageTable table;
    table.d = mu.d;
    table.rho = rho;
    table.sigma = std::move(pass.sigma);
    table.sigma_abs = std::move(pass.sigma_abs);
    table.angular_nodes = (mu.d == 1) ? 2 : angular;
    table.freq_cutoff = opt.freq_cutoff;
    table.step = opt.step;
    return table;
}

double weighted_sigma_integral(const SphericalAverageTable& table, double rho_exponent, int d) {
    if (table.rho.empty()) throw InvalidArgument("weighted_sigma_integral: empty table");
    if (rho_exponent <= 0.0 || rho_exponent > static_cast<double>(d) + 1.0)
        throw InvalidArgument("weighted_sigma_integral: exponent out of range");
    const double p = static_cast<double>(d) - 1.0 - rho_exponent;
    double total = 0.0;
    std::vector<double> block_sums(64, 0.0);
    int top_block = 0;
    for (std::size_t k = 0; k < table.rho.size(); ++k) {
        double h;
        if (k == 0)
            h = table.rho[0];
        else
            h = table.rho[k] - table.rho[k - 1];
        double term = std::pow(table.rho[k], p) * table.sigma_abs[k] * h;
        total += term;
        int j = std::max(0, static_cast<int>(std::floor(std::log2(table.rho[k]))) + 16);
        j = std::min(j, 63);
        block_sums[j] += term;
        top_block = std::max(top_block, j);
    }
    if (total > 0.0 && block_sums[top_block] > 0.10 * total)
        throw Error("weighted_sigma_integral: trailing dyadic block still carries more than "
                    "10 percent of the integral; tail not converged");
    return total;
}

// ---------------------------------------------------------------------------
// Step-length measures
// ---------------------------------------------------------------------------

double torus_diameter(int d) { return std::sqrt(static_cast<double>(d)) * 0.5; }

std::vector<double> uniform_bins(int d, int count) {
    std::vector<double> edges(count + 1);
    const double diam = torus_diameter(d);
    for (int i = 0; i <= count; ++i) edges[i] = diam * static_cast<double>(i) / count;
    return edges;
}

std::vector<double> APLengthMeasure::centers() const {
    std::vector<double> c(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i) c[i] = 0.5 * (bin_edges[i] + bin_edges[i + 1]);
    return c;
}

std::vector<double> APLengthMeasure::densities() const {
    std::vector<double> dens(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i)
        dens[i] = masses[i] / (bin_edges[i + 1] - bin_edges[i]);
    return dens;
}

APLengthMeasure ap_length_measure(const GridDensity& f, const std::vector<double>& bin_edges) {
    if (f.values.minCoeff() < 0.0)
        throw InvalidArgument("ap_length_measure: density must be nonnegative");
    if (bin_edges.size() < 2 || bin_edges.front() > 1e-12 ||
        bin_edges.back() < torus_diameter(f.d) - 1e-12)
        throw InvalidArgument("ap_length_measure: bins must cover [0, diameter]");
    for (std::size_t i = 0; i + 1 < bin_edges.size(); ++i)
        if (bin_edges[i + 1] <= bin_edges[i])
            throw InvalidArgument("ap_length_measure: edges must increase");

    APLengthMeasure out;
    out.bin_edges = bin_edges;
    out.masses.assign(bin_edges.size() - 1, 0.0);
    std::vector<StableSum> bins(out.masses.size());

    const Eigen::Index n = f.n;
    const double scale = static_cast<double>(f.size()) * static_cast<double>(f.size());
    auto bin_of = [&](double r) {
        auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), r);
        std::size_t idx = static_cast<std::size_t>(it - bin_edges.begin());
        if (idx == 0) return std::size_t{0};
        if (idx >= bin_edges.size()) return bin_edges.size() - 2;
        return idx - 1;
    };
    auto axis_dist = [&](Eigen::Index u) {
        Eigen::Index m = std::min(u, n - u);
        return static_cast<double>(m) / static_cast<double>(n);
    };

    if (f.d == 1) {
        const double* a = f.values.data();
        for (Eigen::Index u = 0; u < n; ++u) {
            double s = 0.0;
            Eigen::Index i1 = (n - u) % n;
            Eigen::Index i2 = (i1 >= u) ? i1 - u : i1 - u + n;
            for (Eigen::Index x = 0; x < n; ++x) {
                s += a[x] * a[i1] * a[i2];
                if (++i1 == n) i1 = 0;
                if (++i2 == n) i2 = 0;
            }
            bins[bin_of(axis_dist(u))].add(s / scale);
        }
    } else {
        const double* a = f.values.data();
        for (Eigen::Index u0 = 0; u0 < n; ++u0) {
            const double d0 = axis_dist(u0);
            for (Eigen::Index u1 = 0; u1 < n; ++u1) {
                const double d1 = axis_dist(u1);
                double s = 0.0;
                for (Eigen::Index x0 = 0; x0 < n; ++x0) {
                    const Eigen::Index y0 = (x0 >= u0) ? x0 - u0 : x0 - u0 + n;
                    const Eigen::Index z0 = (y0 >= u0) ? y0 - u0 : y0 - u0 + n;
                    const double* arow = a + x0 * n;
                    const double* brow = a + y0 * n;
                    const double* crow = a + z0 * n;
                    Eigen::Index i1 = (n - u1) % n;
                    Eigen::Index i2 = (i1 >= u1) ? i1 - u1 : i1 - u1 + n;
                    for (Eigen::Index x1 = 0; x1 < n; ++x1) {
                        s += arow[x1] * brow[i1] * crow[i2];
                        if (++i1 == n) i1 = 0;
                        if (++i2 == n) i2 = 0;
                    }
                }
                bins[bin_of(std::hypot(d0, d1))].add(s / scale);
            }
        }
    }
    StableSum total;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        out.masses[i] = bins[i].value();
        total.add(out.masses[i]);
    }
    out.total_mass = total.value();
    return out;
}

DensityWindow direct_density_window(const GridDensity& f, int bins, double r_lo, double r_hi) {
    APLengthMeasure m = ap_length_measure(f, uniform_bins(f.d, bins));
    DensityWindow w;
    auto centers = m.centers();
    auto dens = m.densities();
    for (std::size_t i = 0; i < centers.size(); ++i)
        if (centers[i] >= r_lo && centers[i] <= r_hi) {
            w.r.push_back(centers[i]);
            w.density.push_back(dens[i]);
        }
    return w;
}

double polar_ap_density(const SphericalAverageTable& table, double r, double c_d) {
    if (r <= 0.0) throw InvalidArgument("polar_ap_density: r must be positive");
    if (table.rho.size() < 3) throw InvalidArgument("polar_ap_density: table too small");
    double max_gap = 0.0;
    for (std::size_t k = 1; k < table.rho.size(); ++k)
        max_gap = std::max(max_gap, table.rho[k] - table.rho[k - 1]);
    // the integrand oscillates with period 1/(2r) in rho; require 8 points per period
    if (4.0 * kPi * r * max_gap > kPi / 2.0)
        throw ResolutionError("polar_ap_density: sigma table too coarse for the oscillation at r=" +
                              std::to_string(r));
    const double half_d = static_cast<double>(table.d) / 2.0;
    StableSum acc;
    for (std::size_t k = 0; k < table.rho.size(); ++k) {
        double h;
        if (k == 0)
            h = table.rho[0];
        else if (k + 1 == table.rho.size())
            h = table.rho[k] - table.rho[k - 1];
        else
            h = 0.5 * (table.rho[k + 1] - table.rho[k - 1]);
        double rho = table.rho[k];
        double kernel = bessel_j(table.d, 4.0 * kPi * r * rho);
        acc.add(std::pow(rho, half_d) * kernel * table.sigma[k].real() * h);
    }
    return c_d * std::pow(r, half_d) * acc.value();
}

namespace {

GridDensity wrapped_gaussian(int d, Eigen::Index n, double width) {
    GridDensity f(d, n);
    auto bump = [&](Eigen::Index k) {
        double x = static_cast<double>(k) / static_cast<double>(n);
        double acc = 0.0;
        for (int im = -1; im <= 1; ++im) {
            double t = x + im;
            acc += std::exp(-t * t / (2.0 * width * width));
        }
        return acc;
    };
    if (d == 1) {
        for (Eigen::Index x = 0; x < n; ++x) f.values[x] = bump(x);
    } else {
        std::vector<double> axis(n);
        for (Eigen::Index x = 0; x < n; ++x) axis[x] = bump(x);
        for (Eigen::Index x0 = 0; x0 < n; ++x0)
            for (Eigen::Index x1 = 0; x1 < n; ++x1) f.values[x0 * n + x1] = axis[x0] * axis[x1];
    }
    f.values /= f.mass();
    return f;
}

}  // namespace

PolarCalibration calibrate_polar_constant(int d, Eigen::Index grid_n) {
    const double width = 0.08;
    const Eigen::Index n = grid_n > 0 ? grid_n : (d == 1 ? 2048 : 96);
    GridDensity f = wrapped_gaussian(d, n, width);
    DensityWindow direct = direct_density_window(f, d == 1 ? 100 : 120, 0.05, 0.45);

    SigmaOptions opt;
    if (d == 1) {
        opt.rho_max = 14.0;
        opt.rho_step = 0.05;
        opt.freq_cutoff = 10.0;
        opt.step = 0.03125;
    } else {
        opt.rho_max = 12.0;
        opt.rho_step = 0.1;
        opt.freq_cutoff = 8.0;
        opt.step = 0.125;
    }
    SphericalAverageTable table = build_sigma_table(gaussian_source(d, width), opt);

    double num = 0.0, den = 0.0;
    std::vector<double> polar(direct.r.size());
    for (std::size_t i = 0; i < direct.r.size(); ++i) {
        polar[i] = polar_ap_density(table, direct.r[i], 1.0);
        num += direct.density[i];
        den += polar[i];
    }
    if (den == 0.0) throw Error("calibrate_polar_constant: degenerate polar route");
    PolarCalibration cal;
    cal.c_d = num / den;
    double gap = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < direct.r.size(); ++i) {
        gap += std::abs(direct.density[i] - cal.c_d * polar[i]);
        mass += std::abs(direct.density[i]);
    }
    cal.rel_l1_gap = gap / mass;
    return cal;
}

// ---------------------------------------------------------------------------
// S + L decomposition
// ---------------------------------------------------------------------------

namespace {

// sqrt(t) J_{(d-2)/2}(t) with its finite limit at t = 0
double bessel_core(int d, double t) {
    if (t == 0.0) return (d == 1) ? std::sqrt(2.0 / kPi) : 0.0;
    return std::sqrt(t) * bessel_j(d, t);
}

double phase_offset(int d) {
    const double m = (d - 2) / 2.0;
    return kPi * m / 2.0 + kPi / 4.0;
}

}  // namespace

SLDecomposition sl_decompose(const std::vector<double>& s_grid, const std::vector<double>& frak_s,
                             int d, double s_exponent, const std::vector<double>& r_grid) {
    if (s_grid.size() != frak_s.size() || s_grid.size() < 2)
        throw InvalidArgument("sl_decompose: sample grids misaligned");
    for (double v : frak_s)
        if (v < 0.0) throw InvalidArgument("sl_decompose: samples must be nonnegative");
    for (double r : r_grid)
        if (r <= 0.0) throw InvalidArgument("sl_decompose: output grid must be positive");

    SLDecomposition out;
    out.s_grid = s_grid;
    out.frak_s = frak_s;
    out.r_grid = r_grid;

    const std::size_t ns = s_grid.size();
    const double half_power = (static_cast<double>(d) - 1.0) / 2.0;
    out.frak_S.resize(ns);
    std::vector<double> weight(ns);
    for (std::size_t k = 0; k < ns; ++k) {
        out.frak_S[k] = std::pow(s_grid[k], half_power) * frak_s[k];
        if (k == 0)
            weight[k] = 0.5 * (s_grid[1] - s_grid[0]);
        else if (k + 1 == ns)
            weight[k] = 0.5 * (s_grid[ns - 1] - s_grid[ns - 2]);
        else
            weight[k] = 0.5 * (s_grid[k + 1] - s_grid[k - 1]);
    }

    const double gamma = phase_offset(d);
    const double osc_amp = std::sqrt(2.0 / kPi);
    const std::size_t nr = r_grid.size();
    out.frak_d.resize(nr);
    out.frak_D.resize(nr);
    out.s_part.resize(nr);
    out.l_part.resize(nr);
    out.k_kernel.resize(nr);

    for (std::size_t i = 0; i < nr; ++i) {
        const double r = r_grid[i];
        StableSum big_d, s_acc, l_acc;
        for (std::size_t k = 0; k < ns; ++k) {
            if (out.frak_S[k] == 0.0 && frak_s[k] == 0.0) continue;
            const double t = r * s_grid[k];
            const double core = bessel_core(d, t);
            const double osc = osc_amp * std::cos(t - gamma);
            big_d.add(weight[k] * out.frak_S[k] * core);
            s_acc.add(weight[k] * out.frak_S[k] * osc);
            l_acc.add(weight[k] * out.frak_S[k] * (core - osc));
        }
        out.frak_D[i] = big_d.value();
        out.frak_d[i] = std::pow(r, half_power) * out.frak_D[i];
        out.s_part[i] = s_acc.value();
        out.l_part[i] = l_acc.value();
        out.k_kernel[i] = bessel_kernel(d, r).k;
    }

    auto l2 = [](const std::vector<double>& grid, const std::vector<double>& vals) {
        StableSum acc;
        for (std::size_t k = 0; k < vals.size(); ++k) {
            double w;
            if (k == 0)
                w = grid.size() > 1 ? 0.5 * (grid[1] - grid[0]) : 1.0;
            else if (k + 1 == vals.size())
                w = 0.5 * (grid[k] - grid[k - 1]);
            else
                w = 0.5 * (grid[k + 1] - grid[k - 1]);
            acc.add(w * vals[k] * vals[k]);
        }
        return std::sqrt(acc.value());
    };
    out.norm_S = l2(r_grid, out.s_part);
    out.norm_L = l2(r_grid, out.l_part);
    out.norm_frak_S = l2(s_grid, out.frak_S);

    StableSum energy_acc;
    for (std::size_t k = 0; k < ns; ++k) {
        if (frak_s[k] == 0.0) continue;
        energy_acc.add(weight[k] * frak_s[k] * std::pow(s_grid[k], s_exponent - 1.0));
    }
    out.energy_s = energy_acc.value();
    return out;
}

}  // namespace aplab
