#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ngl/eigen.hpp"
#include "ngl/grid_field.hpp"

namespace ngl::io {

namespace fs = std::filesystem;

// Field dump: one JSON header line
//   {"domain":"torus|planar","grid_n":N,"side":s[,"origin":[x,y]]}
// then N*N little-endian float64 values, row-major (row = y).
void write_gfd(const fs::path& path, const GridField& f);
GridField read_gfd(const fs::path& path);

// Spectrum cache directory: pair_000.gfd, pair_001.gfd, ... and index.json,
// an array of {"lambda","residual","file"} objects.
void write_spectrum(const fs::path& dir, const eigen::Spectrum& spectrum);
eigen::Spectrum read_spectrum(const fs::path& dir);

// Deterministic number formatting for CSV/JSON text: shortest round-trip form.
std::string format_number(double v);

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& values);
  const std::string& text() const { return text_; }
  void save(const fs::path& path) const;

 private:
  std::string text_;
};

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace ngl::io
