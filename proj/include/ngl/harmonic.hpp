#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ngl/grid_field.hpp"
#include "ngl/schrodinger.hpp"

namespace ngl::harmonic {

// Samples of v on |z| = 1 at theta_k = 2 pi k / n, with the real Fourier
// series v(theta) = a_0 + sum_k (a_k cos k theta + b_k sin k theta),
// k <= n / 2.
struct CircleTrace {
  std::vector<double> values;
  std::vector<double> a;
  std::vector<double> b;

  std::size_t size() const { return values.size(); }
  int degree() const { return static_cast<int>(a.size()) - 1; }
  double theta(std::size_t k) const { return two_pi * static_cast<double>(k) / static_cast<double>(values.size()); }
  // Trigonometric series at an arbitrary angle.
  double operator()(double theta) const;
};

CircleTrace make_trace(std::vector<double> values);
CircleTrace sample_trace(const std::function<double(double)>& v, std::size_t n);

/// Random trigonometric polynomial of the given degree, coefficients uniform
/// in [-1, 1] from the keyed generator, sampled at n angles.
CircleTrace random_trace(int degree, std::uint64_t seed, std::size_t n = 256);

struct SignChanges {
  int count = 0;
  bool flagged = false;  // a run of more than 2 (near-)zero samples was skipped
};

/// Cyclic sign alternations of the trace. Samples with |v| < 1e-12 max|v|
/// are skipped. Throws ValidationError on an identically zero trace.
SignChanges sign_changes(const CircleTrace& trace);
SignChanges sign_changes(const std::vector<double>& samples);

/// Harmonic extension sum r^k (a_k cos k theta + b_k sin k theta) at z; |z| <= 1.
double harmonic_value(const CircleTrace& trace, Point z);

/// Extension sampled on an n x n planar grid over [-rho, rho]^2, masked to
/// the disk rho D. Requires 0 < rho < 1.
GridField harmonic_extend(const CircleTrace& trace, double rho, int n = 129);

/// max |v| on the circle |z| = rho from m equally spaced angles (the
/// maximum over rho D by the maximum principle).
double circle_sup(const CircleTrace& trace, double rho, int m = 4096);

struct Robertson {
  int p = 0;
  std::uint64_t value = 0;  // 4^p + (2p)! / (p!)^2
  double bound = 0.0;       // 2 (2e)^{2p}
  bool within = false;
};

/// Exact in 64-bit arithmetic for p <= 31; ValidationError beyond.
Robertson robertson_constant(int p);

inline constexpr double growth_c5 = 8.0 * 2.718281828459045;
inline constexpr double growth_prefactor = 12.0;

struct GrowthVsSigns {
  double lhs_ratio = 0.0;  // sup_{D/2} |v| / sup_{r0 D} |v|
  int n_v = 0;
  double rhs_bound = 0.0;  // 12 (8e / r0)^{N_v}
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  bool holds = false;
};

/// Requires 0 < r0 < 1/2 and a trace that is not identically zero.
GrowthVsSigns growth_vs_signs_check(const CircleTrace& trace, double r0);

struct ZeroCountCheck {
  double lhs = 0.0;   // log sup_{rho+ D} |F| / sup_{rho- D} |F|
  int zero_count = 0; // sign changes of F on the unit circle
  double ratio = 0.0; // lhs / (1 + zero_count)
};

/// rho+ = 1/32 and rho- = (rho+ / 5)(q- / q+)^2 by default.
double default_rho_minus(double rho_plus, double q_minus, double q_plus);

/// Requires 0 < rho_minus < rho_plus < 1/2. Sups use a lattice of spacing
/// rho_minus / 16 on the continuous field; the unit-circle trace has
/// trace_samples points.
ZeroCountCheck zero_count_check(const schrodinger::PlanarField& f, double rho_plus, double rho_minus,
                                std::size_t trace_samples = 4096);

}  // namespace ngl::harmonic
