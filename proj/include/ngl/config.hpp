#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ngl/surface.hpp"

namespace ngl {

inline constexpr int config_version = 1;

// Every knob of an experiment run. Missing JSON keys keep these defaults;
// unknown keys are rejected so typos do not silently fall back.
struct ExperimentConfig {
  surface::MetricProfile metric;
  int grid_n = 520;
  int eigen_count = 31;  // including the constant eigenfunction
  double eigen_tol = 1e-6;

  double k0 = 0.5;
  std::vector<double> k0_sweep{0.25, 0.5, 1.0};
  int sample_grid_m = 32;

  // localization, rapid disks and tiling
  double eps0 = 0.1;
  int planar_n = 1024;
  int localize_pair = 1;
  int family = 0;  // eigenfunctions used by the family commands; 0 means all nonconstant
  double M0 = 10.0;
  double a = 0.1;
  double rapid_delta = 2e-5;
  double delta0 = 0.0;  // tiling start side; 0 picks the largest admissible dyadic side
  int tiling_k_max = 8;

  // crofton
  std::string crofton_kernel = "disk";
  std::string crofton_curve = "segment";  // or "eigenfunctions"
  double crofton_r = 0.05;
  int crofton_samples = 100000;

  // harmonic
  int harmonic_traces = 100;
  int harmonic_max_degree = 10;
  double harmonic_r0 = 0.2;
  double rho_plus = 1.0 / 32.0;
  double rho_minus = 0.0;  // 0 picks (rho+ / 5)(q- / q+)^2

  // carleman
  double carleman_delta = 1e-3;
  double carleman_a = 0.1;
  double carleman_t = 10.0;
  int carleman_family = 120;  // base family; the estimate is extended to twice this

  std::uint64_t seed = 1;
};

/// Throws ValidationError naming the offending key.
void validate(const ExperimentConfig& c);

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over the canonical (key-sorted, compact) dump.
std::string config_hash(const ExperimentConfig& c);
std::string fnv1a_hex(const std::string& bytes);

}  // namespace ngl
