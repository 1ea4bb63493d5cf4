#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "ngl/common.hpp"

namespace ngl {

enum class Domain { torus, planar };

/// Scalar samples on a square lattice.
///
/// Torus fields live on [0,1)^2 with nodes at (i/n, j/n) and wrap in both
/// directions. Planar fields cover a square window whose corners are both
/// nodes, so the spacing is side/(n-1). Values are stored row-major with the
/// row index running along y. Point evaluation (operator()) is bilinear;
/// cubic() gives the C^1 Catmull-Rom interpolant.
template <class Scalar>
class BasicGridField {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Mask = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BasicGridField() = default;

  static BasicGridField torus(int n) {
    BasicGridField f;
    f.n_ = n;
    f.domain_ = Domain::torus;
    f.origin_ = {0.0, 0.0};
    f.side_ = 1.0;
    f.h_ = 1.0 / n;
    f.values_ = Values::Zero(n, n);
    return f;
  }

  static BasicGridField planar(int n, Point origin, double side) {
    BasicGridField f;
    f.n_ = n;
    f.domain_ = Domain::planar;
    f.origin_ = origin;
    f.side_ = side;
    f.h_ = side / (n - 1);
    f.values_ = Values::Zero(n, n);
    return f;
  }

  template <class Fn>
  static BasicGridField sample_torus(int n, Fn&& fn) {
    auto f = torus(n);
    f.fill(fn);
    return f;
  }

  template <class Fn>
  static BasicGridField sample_planar(int n, Point origin, double side, Fn&& fn) {
    auto f = planar(n, origin, side);
    f.fill(fn);
    return f;
  }

  template <class Fn>
  void fill(Fn&& fn) {
    for (int iy = 0; iy < n_; ++iy)
      for (int ix = 0; ix < n_; ++ix) {
        const Point p = node(ix, iy);
        values_(iy, ix) = static_cast<Scalar>(fn(p.x, p.y));
      }
  }

  int n() const { return n_; }
  Domain domain() const { return domain_; }
  bool periodic() const { return domain_ == Domain::torus; }
  double spacing() const { return h_; }
  double side() const { return side_; }
  Point origin() const { return origin_; }
  Box window() const { return {origin_.x, origin_.y, origin_.x + side_, origin_.y + side_}; }

  Point node(int ix, int iy) const { return {origin_.x + ix * h_, origin_.y + iy * h_}; }

  Scalar& at(int ix, int iy) { return values_(iy, ix); }
  const Scalar& at(int ix, int iy) const { return values_(iy, ix); }

  // Index access with periodic wrap (torus) or clamping (planar).
  const Scalar& at_wrapped(int ix, int iy) const {
    if (periodic()) {
      ix %= n_;
      iy %= n_;
      if (ix < 0) ix += n_;
      if (iy < 0) iy += n_;
    } else {
      ix = std::clamp(ix, 0, n_ - 1);
      iy = std::clamp(iy, 0, n_ - 1);
    }
    return values_(iy, ix);
  }

  Values& values() { return values_; }
  const Values& values() const { return values_; }

  void set_disk_mask(Point center, double radius) {
    mask_ = Mask::Zero(n_, n_);
    for (int iy = 0; iy < n_; ++iy)
      for (int ix = 0; ix < n_; ++ix)
        (*mask_)(iy, ix) = distance(node(ix, iy), center) <= radius ? 1 : 0;
  }
  bool has_mask() const { return mask_.has_value(); }
  bool in_mask(int ix, int iy) const { return !mask_ || (*mask_)(iy, ix) != 0; }
  const std::optional<Mask>& mask() const { return mask_; }

  double max_abs() const {
    double m = 0.0;
    for (int iy = 0; iy < n_; ++iy)
      for (int ix = 0; ix < n_; ++ix)
        if (in_mask(ix, iy)) m = std::max(m, static_cast<double>(std::abs(values_(iy, ix))));
    return m;
  }

  bool all_finite() const { return values_.isFinite().all(); }

  Scalar operator()(double x, double y) const {
    const double u = (x - origin_.x) / h_;
    const double v = (y - origin_.y) / h_;
    int ix = static_cast<int>(std::floor(u));
    int iy = static_cast<int>(std::floor(v));
    double fx = u - ix;
    double fy = v - iy;
    if (!periodic()) {
      if (ix < 0) { ix = 0; fx = 0.0; }
      if (iy < 0) { iy = 0; fy = 0.0; }
      if (ix >= n_ - 1) { ix = n_ - 2; fx = 1.0; }
      if (iy >= n_ - 1) { iy = n_ - 2; fy = 1.0; }
    }
    const Scalar a = at_wrapped(ix, iy);
    const Scalar b = at_wrapped(ix + 1, iy);
    const Scalar c = at_wrapped(ix, iy + 1);
    const Scalar d = at_wrapped(ix + 1, iy + 1);
    return static_cast<Scalar>((1 - fy) * ((1 - fx) * a + fx * b) + fy * ((1 - fx) * c + fx * d));
  }
  Scalar operator()(Point p) const { return (*this)(p.x, p.y); }

  Scalar cubic(double x, double y) const {
    const double u = (x - origin_.x) / h_;
    const double v = (y - origin_.y) / h_;
    const int ix = static_cast<int>(std::floor(u));
    const int iy = static_cast<int>(std::floor(v));
    double wx[4], wy[4];
    catmull_rom_weights(u - ix, wx);
    catmull_rom_weights(v - iy, wy);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
      double row = 0.0;
      for (int i = 0; i < 4; ++i) row += wx[i] * at_wrapped(ix - 1 + i, iy - 1 + j);
      acc += wy[j] * row;
    }
    return static_cast<Scalar>(acc);
  }

 private:
  static void catmull_rom_weights(double t, double w[4]) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2 * t2 - t);
    w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
    w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
  }

  int n_ = 0;
  Domain domain_ = Domain::torus;
  Point origin_{};
  double side_ = 1.0;
  double h_ = 1.0;
  Values values_;
  std::optional<Mask> mask_;
};

using GridField = BasicGridField<double>;

// A point sampler is anything callable as f(x, y) -> double; grid fields
// and closures are interchangeable wherever a sampler is expected.
template <class F>
concept PointSampler = requires(const F& f, double x, double y) {
  { f(x, y) } -> std::convertible_to<double>;
};

}  // namespace ngl
