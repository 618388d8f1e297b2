#include "aplab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace aplab {

IntegerSet::IntegerSet(long ambient_, std::vector<long> elems)
    : ambient(ambient_), elements(std::move(elems)) {
    if (ambient < 1) throw InvalidArgument("IntegerSet: ambient size must be positive");
    std::sort(elements.begin(), elements.end());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i] < 0 || elements[i] >= ambient)
            throw InvalidArgument("IntegerSet: element out of range");
        if (i > 0 && elements[i] == elements[i - 1])
            throw InvalidArgument("IntegerSet: duplicate element");
    }
}

GridDensity IntegerSet::indicator(Eigen::Index n) const {
    if (n < ambient) throw InvalidArgument("IntegerSet::indicator: grid smaller than ambient");
    GridDensity f(1, n);
    for (long e : elements) f.values[e] = 1.0;
    return f;
}

std::string IntegerSet::serialize() const {
    std::ostringstream os;
    for (long e : elements) os << e << '\n';
    return os.str();
}

IntegerSet IntegerSet::deserialize(const std::string& text, long ambient) {
    std::istringstream is(text);
    std::vector<long> elems;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        elems.push_back(std::stol(line));
    }
    return IntegerSet(ambient, std::move(elems));
}

bool is_progression_free(const IntegerSet& set) {
    const auto& e = set.elements;
    if (e.empty()) return true;
    std::vector<char> member(e.back() + 1, 0);
    for (long v : e) member[v] = 1;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t k = i + 1; k < e.size(); ++k) {
            long sum = e[i] + e[k];
            if ((sum & 1) == 0) {
                long mid = sum / 2;
                if (mid != e[i] && member[mid]) return false;
            }
        }
    return true;
}

IntegerSet behrend_set(long n) {
    if (n < 3) throw InvalidArgument("behrend_set: need N >= 3");
    std::vector<long> best = {0, 1};  // trivially progression-free fallback
    if (n <= 4) return IntegerSet(n, best);

    for (int m = 2; m <= 16; ++m) {
        const long base = 2 * m - 1;
        // digits in [0, m) stay carry-free under addition in this base; use
        // as many digit places as keep the largest representable value below N
        int digits = 0;
        long max_value = 0;
        long pow = 1;
        double vectors = 1.0;
        while (true) {
            long next_max = max_value + (m - 1) * pow;
            if (next_max >= n || pow > n) break;
            max_value = next_max;
            pow *= base;
            ++digits;
            vectors *= m;
            if (vectors > 4e6) break;
        }
        if (digits < 1 || vectors > 4e6) continue;
        // enumerate digit vectors in {0..m-1}^digits, bucket by squared radius
        std::map<long, std::vector<long>> shells;
        std::vector<int> digit(digits, 0);
        while (true) {
            long value = 0;
            long radius2 = 0;
            for (int i = 0; i < digits; ++i) {
                value = value * base + digit[i];
                radius2 += static_cast<long>(digit[i]) * digit[i];
            }
            if (value < n) shells[radius2].push_back(value);
            int pos = digits - 1;
            while (pos >= 0 && ++digit[pos] == m) digit[pos--] = 0;
            if (pos < 0) break;
        }
        for (auto& [r2, shell] : shells) {
            if (shell.size() > best.size()) best = shell;
        }
    }
    IntegerSet out(n, std::move(best));
    if (!is_progression_free(out))
        throw Error("behrend_set: constructed set failed the exhaustive check");
    return out;
}

namespace {

struct ApFreeSearch {
    int n;
    std::vector<long> chosen;
    std::vector<char> member;
    int best = 0;

    explicit ApFreeSearch(int n_) : n(n_), member(n_, 0) {}

    // elements are added in increasing order, so a new c can only be the
    // largest term of a progression: conflict iff 2b - c is chosen for some b
    bool conflicts(int c) const {
        for (long b : chosen) {
            long a = 2 * b - c;
            if (a >= 0 && member[a]) return true;
        }
        return false;
    }

    void run(int next) {
        best = std::max(best, static_cast<int>(chosen.size()));
        if (static_cast<int>(chosen.size()) + (n - next) <= best) return;
        for (int c = next; c < n; ++c) {
            if (conflicts(c)) continue;
            chosen.push_back(c);
            member[c] = 1;
            run(c + 1);
            member[c] = 0;
            chosen.pop_back();
        }
    }
};

}  // namespace

int max_ap_free_oracle(int n) {
    if (n < 1) throw InvalidArgument("max_ap_free_oracle: need N >= 1");
    if (n > 32)
        throw InvalidArgument(
            "max_ap_free_oracle: exhaustive search is limited to N <= 32; use behrend_set");
    ApFreeSearch search(n);
    search.run(0);
    return search.best;
}

IntegerSet random_set(long n, double delta, std::uint64_t seed) {
    if (delta <= 0.0 || delta > 1.0) throw InvalidArgument("random_set: delta must lie in (0, 1]");
    std::vector<long> elems;
    std::uint64_t state = seed;
    for (long x = 0; x < n; ++x)
        if (to_unit_double(split_mix64(state)) < delta) elems.push_back(x);
    return IntegerSet(n, std::move(elems));
}

long next_prime_at_least(long x) {
    auto is_prime = [](long v) {
        if (v < 2) return false;
        for (long p = 2; p * p <= v; ++p)
            if (v % p == 0) return false;
        return true;
    };
    long v = std::max(2L, x);
    while (!is_prime(v)) ++v;
    return v;
}

long long count_progressions_mod(const IntegerSet& set, long m) {
    if (m < 3) throw InvalidArgument("count_progressions_mod: modulus too small");
    // inverse of 2 mod m (m odd)
    if (m % 2 == 0) throw InvalidArgument("count_progressions_mod: modulus must be odd");
    long inv2 = (m + 1) / 2;
    std::vector<char> member(m, 0);
    for (long v : set.elements) {
        if (v >= m) throw InvalidArgument("count_progressions_mod: element exceeds modulus");
        member[v] = 1;
    }
    long long count = 0;
    const auto& e = set.elements;
    for (long a : e)
        for (long c : e) {
            long mid = static_cast<long>((static_cast<long long>(a + c) * inv2) % m);
            if (member[mid]) ++count;
        }
    return count;
}

// ---------------------------------------------------------------------------

double IfsAxis::similarity_dimension() const {
    return std::log(static_cast<double>(digits.size())) / std::log(static_cast<double>(base));
}

void IfsAxis::validate() const {
    if (base < 2) throw InvalidArgument("IfsAxis: base must be at least 2");
    if (digits.empty() || digits.size() != weights.size())
        throw InvalidArgument("IfsAxis: digits and weights must be nonempty and aligned");
    double sum = 0.0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= base) throw InvalidArgument("IfsAxis: digit out of range");
        if (weights[i] <= 0.0) throw InvalidArgument("IfsAxis: weights must be positive");
        sum += weights[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("IfsAxis: weights must sum to 1");
}

void SelfSimilarMeasure::validate() const {
    if (axes.empty() || axes.size() > 2)
        throw InvalidArgument("SelfSimilarMeasure: dimension must be 1 or 2");
    if (depth < 1) throw InvalidArgument("SelfSimilarMeasure: depth must be positive");
    for (const auto& a : axes) a.validate();
}

SelfSimilarMeasure SelfSimilarMeasure::middle_thirds(int d) {
    SelfSimilarMeasure mu;
    for (int i = 0; i < d; ++i) mu.axes.push_back({3, {0, 2}, {0.5, 0.5}});
    mu.validate();
    return mu;
}

SelfSimilarMeasure SelfSimilarMeasure::full_digits(int base, int d) {
    SelfSimilarMeasure mu;
    for (int i = 0; i < d; ++i) {
        IfsAxis axis;
        axis.base = base;
        for (int a = 0; a < base; ++a) {
            axis.digits.push_back(a);
            axis.weights.push_back(1.0 / base);
        }
        mu.axes.push_back(std::move(axis));
    }
    mu.validate();
    return mu;
}

std::string SelfSimilarMeasure::serialize() const {
    std::ostringstream os;
    os << "d = " << dim() << '\n';
    os << "depth = " << depth << '\n';
    for (int i = 0; i < dim(); ++i) {
        const auto& a = axes[i];
        os << "axis" << i << ".base = " << a.base << '\n';
        os << "axis" << i << ".digits = ";
        for (std::size_t j = 0; j < a.digits.size(); ++j) os << (j ? ", " : "") << a.digits[j];
        os << '\n';
        os << "axis" << i << ".weights = ";
        for (std::size_t j = 0; j < a.weights.size(); ++j) os << (j ? ", " : "") << a.weights[j];
        os << '\n';
    }
    return os.str();
}

SelfSimilarMeasure SelfSimilarMeasure::deserialize(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            std::size_t b = s.find_last_not_of(" \t\r");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto require = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw IoError("measure file missing key: " + key);
        return it->second;
    };
    auto parse_list = [](const std::string& s) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
        return out;
    };
    SelfSimilarMeasure mu;
    int d = std::stoi(require("d"));
    mu.depth = std::stoi(require("depth"));
    for (int i = 0; i < d; ++i) {
        std::string p = "axis" + std::to_string(i) + ".";
        IfsAxis axis;
        axis.base = std::stoi(require(p + "base"));
        for (double v : parse_list(require(p + "digits")))
            axis.digits.push_back(static_cast<int>(v));
        axis.weights = parse_list(require(p + "weights"));
        mu.axes.push_back(std::move(axis));
    }
    mu.validate();
    return mu;
}

Complex ifs_axis_fourier(const IfsAxis& axis, double xi, int depth) {
    Complex prod(1.0, 0.0);
    double scale = 1.0 / axis.base;
    for (int k = 1; k <= depth; ++k) {
        Complex level(0.0, 0.0);
        for (std::size_t j = 0; j < axis.digits.size(); ++j) {
            double ang = -2.0 * kPi * xi * axis.digits[j] * scale;
            level += axis.weights[j] * Complex(std::cos(ang), std::sin(ang));
        }
        prod *= level;
        scale /= axis.base;
        // remaining factors differ from 1 by less than 2 pi |xi| b^{-k}
        if (std::abs(xi) * scale * axis.base < 1e-17) break;
    }
    return prod;
}

Complex self_similar_fourier(const SelfSimilarMeasure& mu, const VectorXd& xi, int depth) {
    if (xi.size() != mu.dim()) throw ShapeError("self_similar_fourier: frequency arity mismatch");
    if (depth < 1) throw InvalidArgument("self_similar_fourier: depth must be positive");
    Complex prod(1.0, 0.0);
    for (int i = 0; i < mu.dim(); ++i) prod *= ifs_axis_fourier(mu.axes[i], xi[i], depth);
    return prod;
}

Complex self_similar_fourier(const SelfSimilarMeasure& mu, const VectorXd& xi) {
    return self_similar_fourier(mu, xi, mu.depth);
}

int recommended_depth(const SelfSimilarMeasure& mu, double r) {
    int base = 2;
    for (const auto& a : mu.axes) base = std::max(base, a.base);
    double log_b = std::log2(static_cast<double>(base));
    int depth = static_cast<int>(std::ceil(std::log2(std::max(2.0, r)) / log_b + 40.0 / log_b));
    return std::max(depth, 8);
}

GridDensity discretize(const SelfSimilarMeasure& mu, Eigen::Index n, int level) {
    mu.validate();
    if (level < 0) throw InvalidArgument("discretize: level must be nonnegative");
    for (const auto& a : mu.axes) {
        double cells = std::pow(static_cast<double>(a.base), level);
        if (cells > static_cast<double>(n))
            throw ResolutionError("discretize: grid cannot resolve level " +
                                  std::to_string(level) + " cells (base^level > N)");
    }
    const int d = mu.dim();
    GridDensity f(d, n);

    // per-axis atom list at the requested level
    struct Atom {
        double pos;
        double mass;
    };
    std::vector<std::vector<Atom>> axes_atoms(d);
    for (int i = 0; i < d; ++i) {
        std::vector<Atom> atoms = {{0.0, 1.0}};
        double scale = 1.0 / mu.axes[i].base;
        for (int k = 0; k < level; ++k) {
            std::vector<Atom> next;
            next.reserve(atoms.size() * mu.axes[i].digits.size());
            for (const auto& at : atoms)
                for (std::size_t j = 0; j < mu.axes[i].digits.size(); ++j)
                    next.push_back({at.pos + mu.axes[i].digits[j] * scale,
                                    at.mass * mu.axes[i].weights[j]});
            atoms = std::move(next);
            scale /= mu.axes[i].base;
        }
        axes_atoms[i] = std::move(atoms);
    }

    const double n_d = static_cast<double>(f.size());
    if (d == 1) {
        for (const auto& at : axes_atoms[0]) {
            Eigen::Index cell = static_cast<Eigen::Index>(std::llround(at.pos * n)) % n;
            f.values[cell] += at.mass * n_d;
        }
    } else {
        for (const auto& a0 : axes_atoms[0])
            for (const auto& a1 : axes_atoms[1]) {
                Eigen::Index c0 = static_cast<Eigen::Index>(std::llround(a0.pos * n)) % n;
                Eigen::Index c1 = static_cast<Eigen::Index>(std::llround(a1.pos * n)) % n;
                f.values[c0 * n + c1] += a0.mass * a1.mass * n_d;
            }
    }
    double mass = f.mass();
    if (mass <= 0.0) throw Error("discretize: degenerate deposit");
    f.values /= mass;
    return f;
}

}  // namespace aplab
