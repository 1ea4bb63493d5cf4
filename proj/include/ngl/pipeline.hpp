#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "ngl/config.hpp"
#include "ngl/eigen.hpp"
#include "ngl/schrodinger.hpp"
#include "ngl/tiling.hpp"

namespace ngl::pipeline {

namespace fs = std::filesystem;

/// Spectrum for the config, served from out/cache/spectrum_<key> when present.
/// The key hashes only what the spectrum depends on (metric, grid_n, count, tol).
eigen::Spectrum load_or_solve_spectrum(const ExperimentConfig& c, const fs::path& out, bool* cache_hit = nullptr);

/// Pair indices 1..family (all nonconstant pairs when config.family == 0).
std::vector<int> family_indices(const ExperimentConfig& c, const eigen::Spectrum& spectrum);

struct Localized {
  int index = 0;
  double lambda = 0.0;
  Point p;  // nodal point of phi nearest (1/2, 1/2)
  schrodinger::PlanarField F;
};

Localized localize_pair(const eigen::Spectrum& spectrum, const surface::ConformalMetric& metric, int index,
                        const ExperimentConfig& c);

struct RapidRow {
  int index = 0;
  double lambda = 0.0;
  schrodinger::RapidCount count;
};

RapidRow rapid_row(const Localized& f, const ExperimentConfig& c);

struct TileRow {
  int index = 0;
  double lambda = 0.0;
  tiling::TilingState state;
  tiling::TotalBound bound;
  std::vector<tiling::LevelCount> counts;
  bool partition_exact = false;     // slow + remaining rapid area units == total
  bool level_bound_holds = false;   // |J(k)| <= 4 |I(k-1)| for k >= 1
  bool reconstruction_ok = false;   // reconstructed sum within 1% of direct clipping
};

TileRow tile_row(const Localized& f, const ExperimentConfig& c);

/// |extended - base| / |base|; 0 when both are 0.
double drift(double base, double extended);

const std::vector<std::string>& command_names();

/// Runs one command, writing its files under `out`. Progress goes to `log`
/// only, so reruns produce identical files.
void run_command(const std::string& command, const ExperimentConfig& c, const fs::path& out, std::ostream& log);

}  // namespace ngl::pipeline
