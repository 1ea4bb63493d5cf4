#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ngl/nodal.hpp"

namespace ngl::crofton {

enum class Kernel { disk, circle };

Kernel parse_kernel(const std::string& name);
std::string kernel_name(Kernel k);

struct CroftonEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
  Kernel kernel = Kernel::disk;
  double r = 0.0;
};

// Probe centres are uniform over a window: the unit torus for periodic sets,
// otherwise the bounding box of the curve grown by r (a probe outside it
// cannot reach the curve).
//
// disk:   value = |W| mean_p H1(curve cap D(p, r)) / (pi r^2)
// circle: value = |W| mean_p #(curve cap dD(p, r)) / (4 r)
//
// Sample i draws its centre from a counter-based generator keyed by
// (seed, kernel, i), so results do not depend on the thread count.
CroftonEstimate disk_average_length(const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed);
CroftonEstimate circle_count_length(const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed);
CroftonEstimate estimate(Kernel k, const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed);

/// Deterministic check of the circle kinematic constant: the integral over
/// p of #(S cap dD(p, r)) for a segment S of length L, by an n x n midpoint
/// rule on the window S + D(0, r), divided by L. Should equal 4 r.
double circle_constant_quadrature(double r, double L, int n);

struct Consistency {
  double direct = 0.0;  // nodal_length, Euclidean
  CroftonEstimate disk;
  CroftonEstimate circle;
  bool disk_agrees = false;    // |disk - direct| <= max(1% direct, 3 stderr)
  bool circle_agrees = false;
};

Consistency crofton_consistency(const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed);

/// Straight segment / polygonal circle as a planar NodalSet (test curves).
nodal::NodalSet segment_curve(Point a, Point b);
nodal::NodalSet circle_curve(Point center, double radius, int pieces);

}  // namespace ngl::crofton
