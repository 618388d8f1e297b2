#ifndef APLAB_IO_HPP
#define APLAB_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aplab/types.hpp"

namespace aplab {

// ---------------------------------------------------------------------------
// Binary container. Little-endian layout:
//   magic "APSL" | version u32 | kind u32 (0 density, 1 spectrum)
//   | d u32 | N u64 | payload (f64 or interleaved f64 re/im)
// ---------------------------------------------------------------------------

void save_density(const GridDensity& f, const std::string& path);
GridDensity load_density(const std::string& path);

void save_spectrum(const Spectrum& s, const std::string& path);
Spectrum load_spectrum(const std::string& path);

// ---------------------------------------------------------------------------
// CSV: index columns first, then value columns. Metadata rides in '#' comment
// lines above the header row.
// ---------------------------------------------------------------------------

std::string density_csv(const GridDensity& f, const std::vector<std::string>& meta = {});
std::string spectrum_csv(const Spectrum& s, const std::vector<std::string>& meta = {});

// Generic table: comment lines, a header row, and rows of doubles.
struct CsvTable {
    std::vector<std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string to_string() const;
    void save(const std::string& path) const;
    static CsvTable load(const std::string& path);
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void append_text_file(const std::string& path, const std::string& content);

// FNV-1a hash of a canonical config rendering; embedded in artifact names.
std::uint64_t fnv1a(const std::string& text);
std::string hash_hex(std::uint64_t h);

// Number formatting used by all emitters (shortest round-trip form).
std::string format_double(double v);

}  // namespace aplab

#endif
