#include "aplab/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace aplab {

namespace {

constexpr char kMagic[4] = {'A', 'P', 'S', 'L'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw IoError("container truncated");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw IoError("container truncated");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

double get_f64(std::istream& is) {
    std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

struct Header {
    std::uint32_t kind;
    int d;
    Eigen::Index n;
};

Header read_header(std::istream& is, const std::string& path) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError(path + ": bad magic; not an APSL container");
    std::uint32_t version = get_u32(is);
    if (version != kFormatVersion)
        throw IoError(path + ": unsupported container version " + std::to_string(version));
    Header h;
    h.kind = get_u32(is);
    h.d = static_cast<int>(get_u32(is));
    h.n = static_cast<Eigen::Index>(get_u64(is));
    if (h.d < 1 || h.d > 3 || h.n < 1) throw IoError(path + ": invalid shape in header");
    return h;
}

}  // namespace

void save_density(const GridDensity& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(kMagic, 4);
    put_u32(os, kFormatVersion);
    put_u32(os, 0);
    put_u32(os, static_cast<std::uint32_t>(f.d));
    put_u64(os, static_cast<std::uint64_t>(f.n));
    for (Eigen::Index i = 0; i < f.size(); ++i) put_f64(os, f.values[i]);
    if (!os) throw IoError("write failed: " + path);
}

GridDensity load_density(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    Header h = read_header(is, path);
    if (h.kind != 0) throw IoError(path + ": container holds a spectrum, not a density");
    GridDensity f(h.d, h.n);
    for (Eigen::Index i = 0; i < f.size(); ++i) f.values[i] = get_f64(is);
    return f;
}

void save_spectrum(const Spectrum& s, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os.write(kMagic, 4);
    put_u32(os, kFormatVersion);
    put_u32(os, 1);
    put_u32(os, static_cast<std::uint32_t>(s.d));
    put_u64(os, static_cast<std::uint64_t>(s.n));
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        put_f64(os, s.coeffs[i].real());
        put_f64(os, s.coeffs[i].imag());
    }
    if (!os) throw IoError("write failed: " + path);
}

Spectrum load_spectrum(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    Header h = read_header(is, path);
    if (h.kind != 1) throw IoError(path + ": container holds a density, not a spectrum");
    Spectrum s(h.d, h.n);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        double re = get_f64(is);
        double im = get_f64(is);
        s.coeffs[i] = Complex(re, im);
    }
    return s;
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

void append_indices(std::ostringstream& os, Eigen::Index flat, int d, Eigen::Index n) {
    std::vector<Eigen::Index> c(d);
    for (int i = d - 1; i >= 0; --i) {
        c[i] = flat % n;
        flat /= n;
    }
    for (int i = 0; i < d; ++i) os << c[i] << ',';
}

}  // namespace

std::string density_csv(const GridDensity& f, const std::vector<std::string>& meta) {
    std::ostringstream os;
    for (const auto& m : meta) os << "# " << m << '\n';
    os << (f.d == 1 ? "i,value" : (f.d == 2 ? "i,j,value" : "i,j,k,value")) << '\n';
    for (Eigen::Index flat = 0; flat < f.size(); ++flat) {
        append_indices(os, flat, f.d, f.n);
        os << format_double(f.values[flat]) << '\n';
    }
    return os.str();
}

std::string spectrum_csv(const Spectrum& s, const std::vector<std::string>& meta) {
    std::ostringstream os;
    for (const auto& m : meta) os << "# " << m << '\n';
    os << (s.d == 1 ? "i,re,im" : (s.d == 2 ? "i,j,re,im" : "i,j,k,re,im")) << '\n';
    for (Eigen::Index flat = 0; flat < s.size(); ++flat) {
        append_indices(os, flat, s.d, s.n);
        os << format_double(s.coeffs[flat].real()) << ',' << format_double(s.coeffs[flat].imag())
           << '\n';
    }
    return os.str();
}

std::string CsvTable::to_string() const {
    std::ostringstream os;
    for (const auto& m : meta) os << "# " << m << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        os << columns[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

void CsvTable::save(const std::string& path) const { write_text_file(path, to_string()); }

CsvTable CsvTable::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    CsvTable t;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::size_t start = line.find_first_not_of("# ");
            t.meta.push_back(start == std::string::npos ? "" : line.substr(start));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header_seen) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
    }
    if (!header_seen) throw IoError(path + ": missing CSV header row");
    return t;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << content;
    if (!os) throw IoError("write failed: " + path);
}

void append_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::app);
    if (!os) throw IoError("cannot open " + path + " for append");
    os << content;
    if (!os) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

}  // namespace aplab
