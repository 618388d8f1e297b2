#include "aplab/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aplab {

namespace {

std::vector<long> flat_coords(Eigen::Index flat, int d, Eigen::Index n) {
    std::vector<long> c(d);
    for (int i = d - 1; i >= 0; --i) {
        c[i] = static_cast<long>(flat % n);
        flat /= n;
    }
    return c;
}

}  // namespace

bool BohrSet::contains(Eigen::Index flat) const {
    return std::binary_search(members.begin(), members.end(), flat);
}

BohrSet bohr_set(const std::vector<std::vector<long>>& freqs, double eta, Eigen::Index n, int d) {
    if (eta <= 0.0) throw InvalidArgument("bohr_set: radius must be positive");
    BohrSet b;
    b.d = d;
    b.n = n;
    b.freqs = freqs;
    b.eta = eta;
    const Eigen::Index total = grid_size(d, n);
    if (freqs.empty() || eta >= 2.0) {
        b.members.resize(total);
        for (Eigen::Index i = 0; i < total; ++i) b.members[i] = i;
        return b;
    }
    for (const auto& xi : freqs)
        if (static_cast<int>(xi.size()) != d)
            throw ShapeError("bohr_set: frequency arity mismatch");
    for (Eigen::Index flat = 0; flat < total; ++flat) {
        auto x = flat_coords(flat, d, n);
        bool in = true;
        for (const auto& xi : freqs) {
            long long dot = 0;
            for (int i = 0; i < d; ++i) dot += static_cast<long long>(xi[i]) * x[i];
            long long m = ((dot % n) + n) % n;
            // |e^{2 pi i m/N} - 1| = 2 sin(pi m / N)
            double dist = 2.0 * std::sin(kPi * static_cast<double>(m) / static_cast<double>(n));
            if (dist > eta) {
                in = false;
                break;
            }
        }
        if (in) b.members.push_back(flat);
    }
    return b;
}

BohrCutResult bohr_cut(const GridDensity& f, double m_bound, double eps, double t_budget) {
    if (f.values.minCoeff() < 0.0) throw InvalidArgument("bohr_cut: density must be nonnegative");
    if (m_bound <= 0.0) throw InvalidArgument("bohr_cut: spectral bound must be positive");
    if (eps <= 0.0) throw InvalidArgument("bohr_cut: eps must be positive");
    if (t_budget <= 1.0) throw InvalidArgument("bohr_cut: budget parameter must exceed 1");

    BohrCutResult out;
    out.eta = std::min(2.0, std::pow(eps / m_bound, t_budget));
    out.lambda = m_bound * out.eta;
    out.q = 3.0 - 3.0 / t_budget;

    Spectrum fs = dual_transform(f);
    std::vector<std::vector<long>> level_set;
    for (Eigen::Index flat = 0; flat < fs.size(); ++flat) {
        if (std::abs(fs.coeffs[flat]) >= out.lambda) {
            auto c = flat_coords(flat, f.d, f.n);
            for (auto& v : c) v = centered_rep(v, static_cast<long>(f.n));
            level_set.push_back(std::move(c));
        }
    }
    out.level_set_size = static_cast<Eigen::Index>(level_set.size());

    BohrSet b = bohr_set(level_set, out.eta, f.n, f.d);
    out.bohr_size = static_cast<Eigen::Index>(b.members.size());
    out.degenerate_bohr = (b.members.size() <= 1);

    // g = phi * f by direct spatial convolution against the Bohr average;
    // keeps g exactly nonnegative and mass-preserving
    const Eigen::Index total = f.size();
    const Eigen::Index n = f.n;
    out.g = GridDensity(f.d, f.n);
    if (f.d == 1) {
        for (Eigen::Index x = 0; x < total; ++x) {
            double s = 0.0;
            for (Eigen::Index m : b.members) {
                Eigen::Index y = x - m;
                if (y < 0) y += n;
                s += f.values[y];
            }
            out.g.values[x] = s / static_cast<double>(b.members.size());
        }
    } else {
        for (Eigen::Index x = 0; x < total; ++x) {
            auto xc = flat_coords(x, f.d, n);
            double s = 0.0;
            for (Eigen::Index m : b.members) {
                auto mc = flat_coords(m, f.d, n);
                Eigen::Index flat = 0;
                for (int i = 0; i < f.d; ++i) {
                    long y = xc[i] - mc[i];
                    if (y < 0) y += n;
                    flat = flat * n + y;
                }
                s += f.values[flat];
            }
            out.g.values[x] = s / static_cast<double>(b.members.size());
        }
    }
    out.h = GridDensity(f.d, f.n, (f.values - out.g.values).eval());

    Spectrum gs = dual_transform(out.g);
    Spectrum hs = dual_transform(out.h);
    out.g_hat_l2 = lq_norm(gs, 2.0);
    out.h_hat_l3 = lq_norm(hs, 3.0);
    out.lq_hypothesis_ok = (lq_norm(fs, std::max(out.q, 1.0)) <= m_bound + 1e-12);

    // flatness of the Bohr mollifier across the level set
    double flat_ratio = 0.0;
    const double inv_b = 1.0 / static_cast<double>(b.members.size());
    for (const auto& xi : level_set) {
        Complex phi_hat(0, 0);
        for (Eigen::Index m : b.members) {
            auto mc = flat_coords(m, f.d, n);
            long long dot = 0;
            for (int i = 0; i < f.d; ++i) dot += static_cast<long long>(xi[i]) * mc[i];
            double ang = -2.0 * kPi * static_cast<double>(((dot % n) + n) % n) /
                         static_cast<double>(n);
            phi_hat += Complex(std::cos(ang), std::sin(ang));
        }
        phi_hat *= inv_b;
        flat_ratio = std::max(flat_ratio, std::abs(1.0 - phi_hat) / (out.eta * out.eta));
    }
    out.mollifier_flatness = flat_ratio;
    return out;
}

double SampledC2Table::operator()(double arg) const {
    if (t.empty()) throw InvalidArgument("c2 table: empty");
    if (arg <= t.front()) return value.front();
    if (arg >= t.back()) return value.back();
    auto it = std::upper_bound(t.begin(), t.end(), arg);
    std::size_t hi = static_cast<std::size_t>(it - t.begin());
    std::size_t lo = hi - 1;
    double w = (arg - t[lo]) / (t[hi] - t[lo]);
    return value[lo] * (1.0 - w) + value[hi] * w;
}

const SampledC2Table& default_c2_table() {
    // Lower envelope measured over the seeded corpus of build_c2_table
    // (N = 256, 600 members, seed 2024); regenerate with `ap-lab run
    // configs/c2_table.toml` and compare against data emitted there.
    static const SampledC2Table table = [] {
        SampledC2Table t;
        t.t = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50,
               0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 1.00};
        t.value = {0.022421, 0.022421, 0.022421, 0.022488, 0.027830, 0.032532, 0.049718,
                   0.070244, 0.097167, 0.129728, 0.170037, 0.223933, 0.282090, 0.345405,
                   0.431446, 0.517200, 0.616407, 0.804977, 0.859855, 1.000000};
        return t;
    }();
    return table;
}

double q_threshold(double m, double delta, const C2Table& c2, double c1, double c2_const) {
    if (!(m >= delta) || delta <= 0.0)
        throw InvalidArgument("q_threshold: need M >= delta > 0");
    const double c = c2(delta / m);
    if (c <= 0.0) throw InvalidArgument("q_threshold: table returned a nonpositive value");

    const double scaled = c2_const * c;
    auto objective = [&](double t) {
        double branch1 = 3.0 * (1.0 - 1.0 / t);
        double branch2;
        if (scaled >= 1.0) {
            branch2 = std::numeric_limits<double>::infinity();
        } else {
            double r_pow = std::pow(1.0 / scaled, t);
            branch2 = c1 / (r_pow * std::log(r_pow));
        }
        return std::min(branch1, branch2);
    };

    double lo = 1.0 + std::pow(2.0, -10.0);
    double hi = 64.0;
    double best_t = lo, best_v = -1.0;
    double prev_best = -2.0;
    for (int round = 0; round < 24 && std::abs(best_v - prev_best) > 1e-6; ++round) {
        prev_best = best_v;
        const int grid = 160;
        double step = std::pow(hi / lo, 1.0 / grid);
        double tt = lo;
        double round_best_t = lo, round_best_v = -1.0;
        for (int i = 0; i <= grid; ++i, tt *= step) {
            double v = objective(tt);
            if (v > round_best_v) {
                round_best_v = v;
                round_best_t = tt;
            }
        }
        if (round_best_v > best_v) {
            best_v = round_best_v;
            best_t = round_best_t;
        }
        lo = std::max(1.0 + std::pow(2.0, -12.0), round_best_t / step);
        hi = round_best_t * step;
    }
    (void)best_t;
    return 2.0 + std::min(1.0, best_v);
}

TruncationResult truncate_l2(const GridDensity& f, double eps) {
    if (eps <= 0.0) throw InvalidArgument("truncate_l2: eps must be positive");
    if (f.l2_norm() > 1.0 + 1e-12)
        throw InvalidArgument("truncate_l2: density must be L2-normalized first");
    TruncationResult out;
    out.cutoff = 3.0 / eps;
    out.low = GridDensity(f.d, f.n, f.values.min(out.cutoff).eval());
    out.high = GridDensity(f.d, f.n, (f.values - out.low.values).eval());
    out.high_l2 = out.high.l2_norm();
    out.tail_bound_holds = (out.high_l2 <= eps / std::sqrt(3.0) + 1e-12);
    return out;
}

double spectral_window(double radius, int level) {
    const double full = std::pow(2.0, level);
    const double half = 0.5 * full;
    if (radius <= half) return 1.0;
    if (radius >= full) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * (radius - half) / (full - half)));
}

GridDensity spectral_truncate(const GridDensity& f, int level) {
    if (level < 0) throw InvalidArgument("spectral_truncate: level must be nonnegative");
    Spectrum s = dual_transform(f);
    for (Eigen::Index flat = 0; flat < s.size(); ++flat)
        s.coeffs[flat] *= spectral_window(centered_norm(flat, f.d, f.n), level);
    return inverse_transform(s);
}

SampledC2Table build_c2_table(const C2BuildSettings& settings) {
    struct Member {
        double mass;
        double count;
    };
    std::vector<Member> corpus;
    corpus.reserve(settings.corpus_size);

    const double spikes[] = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    const double supports[] = {1.0, 0.6, 0.3, 0.12, 0.05};

    for (int i = 0; i < settings.corpus_size; ++i) {
        double p = spikes[i % 8];
        double rho = supports[(i / 8) % 5];
        std::uint64_t state = derive_seed(settings.seed, static_cast<std::uint64_t>(i));
        GridDensity f(1, settings.n);
        for (Eigen::Index x = 0; x < settings.n; ++x) {
            double keep = to_unit_double(split_mix64(state));
            double u = to_unit_double(split_mix64(state));
            f.values[x] = (keep < rho) ? std::pow(u, p) : 0.0;
        }
        double l2 = f.l2_norm();
        if (l2 <= 0.0) continue;
        f.values /= l2;
        corpus.push_back({f.mass(), lambda3_spectral(f)});
    }

    SampledC2Table table;
    for (int k = 1; k <= 20; ++k) {
        double tg = 0.05 * k;
        double envelope = std::numeric_limits<double>::infinity();
        for (const auto& m : corpus)
            if (m.mass >= tg - 1e-12) envelope = std::min(envelope, m.count);
        if (!std::isfinite(envelope)) break;
        table.t.push_back(tg);
        table.value.push_back(envelope);
    }
    if (table.t.empty()) throw Error("build_c2_table: corpus produced no admissible members");
    return table;
}

}  // namespace aplab
