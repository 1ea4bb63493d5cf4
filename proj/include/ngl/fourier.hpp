#pragma once

#include <complex>
#include <vector>

#include "ngl/grid_field.hpp"

namespace ngl {

/// Trigonometric interpolant of a torus field: the unique trigonometric
/// polynomial (frequencies |k| <= n/2) through the samples, evaluated in
/// closed form at arbitrary points. Coefficients below rel_cutoff times the
/// largest one are dropped, so smooth fields evaluate in O(#modes).
///
/// Eigenfunctions of the flat discrete operator are exact sums of a few
/// Fourier modes, so for them this reproduces the underlying smooth function
/// exactly, derivatives included.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const GridField& torus_field, double rel_cutoff = 1e-12);

  double operator()(double x, double y) const;
  double laplacian(double x, double y) const;
  // Values at origin + (i, j) * step for i < nx, j < ny, row index j. Uses
  // the separable structure, so the cost is (#distinct kx) * nx * ny.
  GridField::Values sample_lattice(Point origin, double step, int nx, int ny) const;
  std::size_t mode_count() const { return modes_.size(); }

 private:
  struct Mode {
    double kx, ky;  // angular frequencies 2 pi m
    double re, im;  // coefficient of exp(i (kx x + ky y)), real part taken
  };
  std::vector<Mode> modes_;
};

}  // namespace ngl
