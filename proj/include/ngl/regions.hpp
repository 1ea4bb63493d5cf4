#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ngl/common.hpp"
#include "ngl/grid_field.hpp"

namespace ngl {

// Regions are described in unwrapped plane coordinates; torus fields wrap on
// evaluation, so a disk straddling the period boundary needs no special case.
//
// Every region provides:
//   contains(p)            closed membership test
//   bounds()               bounding box
//   may_intersect(box)     conservative cell test (false => disjoint)
//   boundary_points(step)  points on the region boundary, at most `step` apart

struct EuclideanDisk {
  Point center;
  double radius = 0.0;

  bool contains(Point p) const { return distance(p, center) <= radius; }
  Box bounds() const {
    return {center.x - radius, center.y - radius, center.x + radius, center.y + radius};
  }
  bool may_intersect(const Box& b) const {
    const double dx = std::max({b.xmin - center.x, 0.0, center.x - b.xmax});
    const double dy = std::max({b.ymin - center.y, 0.0, center.y - b.ymax});
    return dx * dx + dy * dy <= radius * radius;
  }
  void boundary_points(double step, std::vector<Point>& out) const;
  double area() const { return pi * radius * radius; }
};

struct Annulus {
  Point center;
  double inner = 0.0;
  double outer = 0.0;

  bool contains(Point p) const {
    const double d = distance(p, center);
    return d >= inner && d <= outer;
  }
  Box bounds() const { return EuclideanDisk{center, outer}.bounds(); }
  bool may_intersect(const Box& b) const {
    if (!EuclideanDisk{center, outer}.may_intersect(b)) return false;
    const double fx = std::max(std::abs(b.xmin - center.x), std::abs(b.xmax - center.x));
    const double fy = std::max(std::abs(b.ymin - center.y), std::abs(b.ymax - center.y));
    return fx * fx + fy * fy >= inner * inner;
  }
  void boundary_points(double step, std::vector<Point>& out) const;
  double area() const { return pi * (outer * outer - inner * inner); }
};

// Integer lattice origin + (i, j) * h used to place samples.
struct Lattice {
  Point origin;
  double h = 1.0;

  static Lattice of(const GridField& f) { return {f.origin(), f.spacing()}; }
  Point node(long i, long j) const { return {origin.x + i * h, origin.y + j * h}; }
};

namespace detail {

struct CellRange {
  long i0, i1, j0, j1;  // node index ranges, inclusive
};

inline CellRange cell_range(const Box& b, const Lattice& lat) {
  return {static_cast<long>(std::floor((b.xmin - lat.origin.x) / lat.h)),
          static_cast<long>(std::ceil((b.xmax - lat.origin.x) / lat.h)),
          static_cast<long>(std::floor((b.ymin - lat.origin.y) / lat.h)),
          static_cast<long>(std::ceil((b.ymax - lat.origin.y) / lat.h))};
}

}  // namespace detail

/// Maximum of |f| over a region.
///
/// Candidates are the lattice nodes inside the region, an oversample x
/// oversample sub-grid of every cell the region only partly covers, and a
/// dense set of points on the region boundary. For a bilinear grid field the
/// interior of a fully covered cell cannot exceed its corners, so this
/// resolves the supremum of the interpolant up to the boundary sampling.
/// Throws ValidationError when no node or sub-sample falls inside the region.
template <PointSampler F, class Region>
double sup_on_region(const F& f, const Region& region, const Lattice& lat, int oversample = 4) {
  const auto r = detail::cell_range(region.bounds(), lat);
  const long nx = r.i1 - r.i0 + 1;
  const long ny = r.j1 - r.j0 + 1;
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(nx * ny));
  double best = 0.0;
  bool any = false;
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      const Point p = lat.node(r.i0 + i, r.j0 + j);
      if (region.contains(p)) {
        inside[j * nx + i] = 1;
        best = std::max(best, std::abs(static_cast<double>(f(p.x, p.y))));
        any = true;
      }
    }
  const double sub = lat.h / oversample;
  for (long j = 0; j + 1 < ny; ++j)
    for (long i = 0; i + 1 < nx; ++i) {
      const int corners = inside[j * nx + i] + inside[j * nx + i + 1] + inside[(j + 1) * nx + i] +
                          inside[(j + 1) * nx + i + 1];
      if (corners == 4) continue;
      const Point c = lat.node(r.i0 + i, r.j0 + j);
      if (!region.may_intersect({c.x, c.y, c.x + lat.h, c.y + lat.h})) continue;
      for (int b = 0; b <= oversample; ++b)
        for (int a = 0; a <= oversample; ++a) {
          const Point p{c.x + a * sub, c.y + b * sub};
          if (region.contains(p)) {
            best = std::max(best, std::abs(static_cast<double>(f(p.x, p.y))));
            any = true;
          }
        }
    }
  if (!any) throw ValidationError("region contains no samples: radius below grid resolution");
  std::vector<Point> rim;
  region.boundary_points(sub, rim);
  for (const Point& p : rim) best = std::max(best, std::abs(static_cast<double>(f(p.x, p.y))));
  return best;
}

template <class Region>
double sup_on_region(const GridField& f, const Region& region, int oversample = 4) {
  return sup_on_region(f, region, Lattice::of(f), oversample);
}

/// (integral over the region of |f|^qexp)^(1/qexp) by cell quadrature:
/// covered cells use the corner average, partly covered cells are clipped by
/// sub-cell midpoints. Throws ValidationError on an empty region.
template <PointSampler F, class Region>
double lq_norm_on_region(const F& f, const Region& region, const Lattice& lat, double qexp,
                         int oversample = 4) {
  if (!(qexp >= 1.0)) throw ValidationError("L^q exponent must be >= 1");
  const auto r = detail::cell_range(region.bounds(), lat);
  const long nx = r.i1 - r.i0 + 1;
  const long ny = r.j1 - r.j0 + 1;
  std::vector<double> pw(static_cast<std::size_t>(nx * ny), -1.0);
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      const Point p = lat.node(r.i0 + i, r.j0 + j);
      if (region.contains(p)) pw[j * nx + i] = std::pow(std::abs(static_cast<double>(f(p.x, p.y))), qexp);
    }
  const double sub = lat.h / oversample;
  const double cell_area = lat.h * lat.h;
  const double sub_area = sub * sub;
  double sum = 0.0;
  double area = 0.0;
  for (long j = 0; j + 1 < ny; ++j)
    for (long i = 0; i + 1 < nx; ++i) {
      const double c00 = pw[j * nx + i], c10 = pw[j * nx + i + 1];
      const double c01 = pw[(j + 1) * nx + i], c11 = pw[(j + 1) * nx + i + 1];
      if (c00 >= 0 && c10 >= 0 && c01 >= 0 && c11 >= 0) {
        sum += cell_area * 0.25 * (c00 + c10 + c01 + c11);
        area += cell_area;
        continue;
      }
      const Point c = lat.node(r.i0 + i, r.j0 + j);
      if (!region.may_intersect({c.x, c.y, c.x + lat.h, c.y + lat.h})) continue;
      for (int b = 0; b < oversample; ++b)
        for (int a = 0; a < oversample; ++a) {
          const Point p{c.x + (a + 0.5) * sub, c.y + (b + 0.5) * sub};
          if (!region.contains(p)) continue;
          sum += sub_area * std::pow(std::abs(static_cast<double>(f(p.x, p.y))), qexp);
          area += sub_area;
        }
    }
  if (area <= 0.0) throw ValidationError("region contains no samples: radius below grid resolution");
  return std::pow(sum, 1.0 / qexp);
}

template <class Region>
double lq_norm_on_region(const GridField& f, const Region& region, double qexp, int oversample = 4) {
  return lq_norm_on_region(f, region, Lattice::of(f), qexp, oversample);
}

// Integral of g over a region by the same clipped cell quadrature (g may be
// any sampler, e.g. F^2 or a weighted gradient energy).
template <PointSampler G, class Region>
double integrate_on_region(const G& g, const Region& region, const Lattice& lat, int oversample = 4) {
  const auto r = detail::cell_range(region.bounds(), lat);
  const long nx = r.i1 - r.i0 + 1;
  const long ny = r.j1 - r.j0 + 1;
  std::vector<double> val(static_cast<std::size_t>(nx * ny), 0.0);
  std::vector<std::uint8_t> in(static_cast<std::size_t>(nx * ny), 0);
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      const Point p = lat.node(r.i0 + i, r.j0 + j);
      if (region.contains(p)) {
        in[j * nx + i] = 1;
        val[j * nx + i] = g(p.x, p.y);
      }
    }
  const double sub = lat.h / oversample;
  double sum = 0.0;
  for (long j = 0; j + 1 < ny; ++j)
    for (long i = 0; i + 1 < nx; ++i) {
      const long k = j * nx + i;
      if (in[k] && in[k + 1] && in[k + nx] && in[k + nx + 1]) {
        sum += lat.h * lat.h * 0.25 * (val[k] + val[k + 1] + val[k + nx] + val[k + nx + 1]);
        continue;
      }
      const Point c = lat.node(r.i0 + i, r.j0 + j);
      if (!region.may_intersect({c.x, c.y, c.x + lat.h, c.y + lat.h})) continue;
      for (int b = 0; b < oversample; ++b)
        for (int a = 0; a < oversample; ++a) {
          const Point p{c.x + (a + 0.5) * sub, c.y + (b + 0.5) * sub};
          if (region.contains(p)) sum += sub * sub * g(p.x, p.y);
        }
    }
  return sum;
}

}  // namespace ngl
