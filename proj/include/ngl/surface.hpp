#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ngl/common.hpp"
#include "ngl/grid_field.hpp"
#include "ngl/regions.hpp"

namespace ngl::surface {

// Named conformal factor on the unit torus. The sampled q is scale * base,
// with base one of
//   flat: 1
//   wave: 1 + amplitude * sin(2 pi kx x) sin(2 pi ky y)
struct MetricProfile {
  std::string name = "flat";
  double amplitude = 0.2;
  int kx = 1;
  int ky = 1;
  double scale = 1.0;

  double operator()(double x, double y) const;
};

/// Conformally flat metric g = q (dx^2 + dy^2) on the unit torus.
class ConformalMetric {
 public:
  ConformalMetric(MetricProfile profile, GridField q);

  const MetricProfile& profile() const { return profile_; }
  int grid_n() const { return q_.n(); }
  double spacing() const { return q_.spacing(); }
  const GridField& q() const { return q_; }
  double q_minus() const { return q_minus_; }
  double q_plus() const { return q_plus_; }
  double volume() const { return volume_; }
  // q_- / (5 q^+)
  double alpha0() const { return alpha0_; }

  // Conformal factor at an arbitrary point (exact profile, wrapped).
  double q_at(Point p) const { return profile_(wrap_unit(p.x), wrap_unit(p.y)); }
  double sqrt_q_at(Point p) const { return std::sqrt(q_at(p)); }

 private:
  MetricProfile profile_;
  GridField q_;
  double q_minus_ = 0.0;
  double q_plus_ = 0.0;
  double volume_ = 0.0;
  double alpha0_ = 0.0;
};

ConformalMetric make_metric(const MetricProfile& profile, int grid_n);

/// Metric length of the straight segment a-b: integral of sqrt(q) ds by
/// 3-point Gauss-Legendre.
double metric_length(const ConformalMetric& metric, Point a, Point b);

/// Geodesic distance from a source, sampled on (a window of) the torus grid.
///
/// Node (i, j) of the underlying lattice sits at (i h, j h) in unwrapped
/// coordinates; the window covers i in [i0, i0 + width) and likewise for j.
/// When the window spans the whole torus the solve is periodic and lookups
/// wrap; otherwise nodes outside the window read as +infinity.
class DistancePatch {
 public:
  DistancePatch(Point source, int grid_n, long i0, long j0, int width, std::vector<double> d);

  Point source() const { return source_; }
  double spacing() const { return h_; }
  bool periodic() const { return width_ >= grid_n_; }
  long i0() const { return i0_; }
  long j0() const { return j0_; }
  int width() const { return width_; }

  double node(long i, long j) const;
  // Bilinear interpolation in unwrapped coordinates.
  double operator()(Point p) const;

  GridField to_grid() const;

 private:
  Point source_;
  int grid_n_;
  double h_;
  long i0_, j0_;
  int width_;
  std::vector<double> d_;
};

/// First-order fast marching for |grad d| = sqrt(q) with a 4-neighbour upwind
/// stencil. Nodes within two cells of the source are seeded with the
/// locally-flat distance. With a finite max_radius the march runs on a local
/// window and stops a few cells beyond that radius.
DistancePatch geodesic_patch(const ConformalMetric& metric, Point source, double max_radius);

/// Full periodic geodesic distance field from p.
GridField geodesic_distance(const ConformalMetric& metric, Point p);

/// Metric disk {d(source, .) <= radius}, a region over a shared distance patch.
struct MetricDisk {
  std::shared_ptr<const DistancePatch> distance;
  double radius = 0.0;
  double inv_sqrt_q_minus = 1.0;

  Point center() const { return distance->source(); }
  // Euclidean half-width of the bounding box.
  double reach() const { return radius * inv_sqrt_q_minus + 2.0 * distance->spacing(); }
  // Concentric disk over the same distance patch (r must not exceed the
  // radius the patch was solved for).
  MetricDisk with_radius(double r) const { return {distance, r, inv_sqrt_q_minus}; }
  bool contains(Point p) const { return (*distance)(p) <= radius; }
  Box bounds() const;
  bool may_intersect(const Box& b) const;
  // Crossings of d = radius along lattice edges (linear in d per edge).
  void boundary_points(double step, std::vector<Point>& out) const;
};

MetricDisk make_metric_disk(const ConformalMetric& metric, Point center, double radius);

}  // namespace ngl::surface
