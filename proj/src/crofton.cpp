#include "ngl/crofton.hpp"

#include "ngl/parallel.hpp"
#include "ngl/rng.hpp"

namespace ngl::crofton {

namespace {

using nodal::Segment;

// Uniform bucket grid over the probe window. Segments are cut into pieces no
// longer than r and filed by midpoint, so with cells at least 1.5 r wide every
// piece that can meet D(p, r) sits in the 3 x 3 block around p's cell.
class SegmentIndex {
 public:
  SegmentIndex(const nodal::NodalSet& curve, double r) : periodic_(curve.periodic) {
    std::vector<Segment> pieces;
    for (const Segment& s : curve.segments) {
      const double len = distance(s.a, s.b);
      const int m = std::max(1, static_cast<int>(std::ceil(len / r)));
      for (int i = 0; i < m; ++i)
        pieces.push_back({s.a + (double(i) / m) * (s.b - s.a), s.a + (double(i + 1) / m) * (s.b - s.a)});
    }
    if (periodic_) {
      window_ = {0.0, 0.0, 1.0, 1.0};
    } else if (pieces.empty()) {
      window_ = {0.0, 0.0, 0.0, 0.0};
    } else {
      window_ = {pieces[0].a.x, pieces[0].a.y, pieces[0].a.x, pieces[0].a.y};
      for (const Segment& s : pieces)
        for (Point p : {s.a, s.b}) {
          window_.xmin = std::min(window_.xmin, p.x);
          window_.xmax = std::max(window_.xmax, p.x);
          window_.ymin = std::min(window_.ymin, p.y);
          window_.ymax = std::max(window_.ymax, p.y);
        }
      window_ = {window_.xmin - r, window_.ymin - r, window_.xmax + r, window_.ymax + r};
    }
    nx_ = std::max(1, static_cast<int>(std::floor(window_.width() / (1.5 * r))));
    ny_ = std::max(1, static_cast<int>(std::floor(window_.height() / (1.5 * r))));
    // With fewer than 3 cells a periodic 3 x 3 block would visit a cell twice.
    if (periodic_ && (nx_ < 3 || ny_ < 3)) nx_ = ny_ = 1;
    cells_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (const Segment& s : pieces) {
      Point mid = 0.5 * (s.a + s.b);
      Segment t = s;
      if (periodic_) {
        const Point shift{-std::floor(mid.x), -std::floor(mid.y)};
        t = {s.a + shift, s.b + shift};
        mid = mid + shift;
      }
      cells_[cell_of(mid)].push_back(t);
    }
  }

  const Box& window() const { return window_; }
  double area() const { return window_.width() * window_.height(); }

  template <class Fn>
  void visit(Point p, Fn&& fn) const {
    if (nx_ == 1 && ny_ == 1) {
      for (const Segment& s : cells_[0]) fn(image_near(s, p));
      return;
    }
    const int ci = clampi(static_cast<int>(std::floor((p.x - window_.xmin) / window_.width() * nx_)), nx_);
    const int cj = clampi(static_cast<int>(std::floor((p.y - window_.ymin) / window_.height() * ny_)), ny_);
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int i = ci + di, j = cj + dj;
        if (periodic_) {
          i = (i + nx_) % nx_;
          j = (j + ny_) % ny_;
        } else if (i < 0 || j < 0 || i >= nx_ || j >= ny_) {
          continue;
        }
        for (const Segment& s : cells_[static_cast<std::size_t>(j) * nx_ + i]) fn(image_near(s, p));
      }
  }

 private:
  static int clampi(int v, int n) { return std::clamp(v, 0, n - 1); }

  std::size_t cell_of(Point p) const {
    const int i = clampi(static_cast<int>(std::floor((p.x - window_.xmin) / window_.width() * nx_)), nx_);
    const int j = clampi(static_cast<int>(std::floor((p.y - window_.ymin) / window_.height() * ny_)), ny_);
    return static_cast<std::size_t>(j) * nx_ + i;
  }

  Segment image_near(const Segment& s, Point p) const {
    if (!periodic_) return s;
    const Point mid = 0.5 * (s.a + s.b);
    const Point shift{std::round(p.x - mid.x), std::round(p.y - mid.y)};
    return {s.a + shift, s.b + shift};
  }

  bool periodic_;
  Box window_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<Segment>> cells_;
};

template <class PerProbe>
CroftonEstimate run(Kernel kernel, const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed,
                    double constant, PerProbe&& per_probe) {
  if (samples == 0) throw ValidationError("Crofton estimate needs at least one sample");
  if (!(r > 0.0)) throw ValidationError("probe radius must be positive");
  if (curve.periodic && !(r < 0.25)) throw ValidationError("probe radius on the torus must be < 1/4");
  CroftonEstimate est;
  est.kernel = kernel;
  est.r = r;
  est.samples = samples;
  if (curve.segments.empty()) return est;
  const SegmentIndex index(curve, r);
  const Box& w = index.window();
  const KeyedRng rng(seed, kernel == Kernel::disk ? 0 : 1);
  std::vector<double> x(samples);
  parallel_for(samples, [&](std::size_t i) {
    const Point p{w.xmin + w.width() * rng.uniform(2 * i), w.ymin + w.height() * rng.uniform(2 * i + 1)};
    double acc = 0.0;
    index.visit(p, [&](const Segment& s) { acc += per_probe(s, p); });
    x[i] = acc;
  });
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / samples;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = samples > 1 ? ss / (samples - 1) : 0.0;
  const double scale = index.area() / constant;
  est.value = scale * mean;
  est.stderr_ = scale * std::sqrt(var / samples);
  return est;
}

}  // namespace

Kernel parse_kernel(const std::string& name) {
  if (name == "disk") return Kernel::disk;
  if (name == "circle") return Kernel::circle;
  throw ValidationError("unknown Crofton kernel '" + name + "' (expected disk or circle)");
}

std::string kernel_name(Kernel k) { return k == Kernel::disk ? "disk" : "circle"; }

CroftonEstimate disk_average_length(const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed) {
  return run(Kernel::disk, curve, r, samples, seed, pi * r * r,
             [r](const Segment& s, Point p) { return nodal::segment_length_in_disk(s, p, r); });
}

CroftonEstimate circle_count_length(const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed) {
  return run(Kernel::circle, curve, r, samples, seed, 4.0 * r,
             [r](const Segment& s, Point p) { return double(nodal::segment_circle_crossings(s, p, r)); });
}

CroftonEstimate estimate(Kernel k, const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed) {
  return k == Kernel::disk ? disk_average_length(curve, r, samples, seed)
                           : circle_count_length(curve, r, samples, seed);
}

double circle_constant_quadrature(double r, double L, int n) {
  if (!(r > 0.0 && L > 0.0) || n < 1) throw ValidationError("bad quadrature parameters");
  const Segment s{{0.0, 0.0}, {L, 0.0}};
  const double wx = L + 2 * r, wy = 2 * r;
  const double hx = wx / n, hy = wy / n;
  std::vector<double> rows(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const double y = -r + (j + 0.5) * hy;
    long count = 0;
    for (int i = 0; i < n; ++i) count += nodal::segment_circle_crossings(s, {-r + (i + 0.5) * hx, y}, r);
    rows[j] = static_cast<double>(count);
  });
  double total = 0.0;
  for (double v : rows) total += v;
  return total * hx * hy / L;
}

Consistency crofton_consistency(const nodal::NodalSet& curve, double r, std::size_t samples, std::uint64_t seed) {
  Consistency c;
  c.direct = nodal::nodal_length(curve).euclidean;
  c.disk = disk_average_length(curve, r, samples, seed);
  c.circle = circle_count_length(curve, r, samples, seed);
  auto agrees = [&](const CroftonEstimate& e) {
    return std::abs(e.value - c.direct) <= std::max(0.01 * c.direct, 3.0 * e.stderr_);
  };
  c.disk_agrees = agrees(c.disk);
  c.circle_agrees = agrees(c.circle);
  return c;
}

nodal::NodalSet segment_curve(Point a, Point b) {
  nodal::NodalSet set;
  set.segments.push_back({a, b});
  set.euclidean_length = distance(a, b);
  return set;
}

nodal::NodalSet circle_curve(Point center, double radius, int pieces) {
  nodal::NodalSet set;
  for (int k = 0; k < pieces; ++k) {
    const double t0 = two_pi * k / pieces, t1 = two_pi * (k + 1) / pieces;
    set.segments.push_back({{center.x + radius * std::cos(t0), center.y + radius * std::sin(t0)},
                            {center.x + radius * std::cos(t1), center.y + radius * std::sin(t1)}});
    set.euclidean_length += distance(set.segments.back().a, set.segments.back().b);
  }
  return set;
}

}  // namespace ngl::crofton
