#include "ngl/surface.hpp"

#include <limits>
#include <queue>

namespace ngl::surface {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

long floor_mod(long a, long n) {
  a %= n;
  return a < 0 ? a + n : a;
}

// Solution of the upwind quadratic for one node given the smaller neighbour
// value along each axis.
double eikonal_update(double a, double b, double fh) {
  if (a > b) std::swap(a, b);
  if (b == inf || b - a >= fh) return a + fh;
  const double diff = b - a;
  return 0.5 * (a + b + std::sqrt(2.0 * fh * fh - diff * diff));
}

}  // namespace

double MetricProfile::operator()(double x, double y) const {
  if (name == "flat") return scale;
  if (name == "wave") return scale * (1.0 + amplitude * std::sin(two_pi * kx * x) * std::sin(two_pi * ky * y));
  throw ValidationError("unknown metric profile '" + name + "' (expected flat or wave)");
}

ConformalMetric::ConformalMetric(MetricProfile profile, GridField q) : profile_(std::move(profile)), q_(std::move(q)) {
  q_minus_ = q_.values().minCoeff();
  q_plus_ = q_.values().maxCoeff();
  if (!(q_minus_ > 0.0) || !q_.all_finite())
    throw ValidationError("conformal factor must be finite and strictly positive at every sample");
  const double h = q_.spacing();
  volume_ = h * h * q_.values().sum();
  alpha0_ = q_minus_ / (5.0 * q_plus_);
}

ConformalMetric make_metric(const MetricProfile& profile, int grid_n) {
  if (grid_n < 16) throw ValidationError("grid_n must be at least 16");
  return ConformalMetric(profile, GridField::sample_torus(grid_n, [&](double x, double y) { return profile(x, y); }));
}

double metric_length(const ConformalMetric& metric, Point a, Point b) {
  static constexpr double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double len = distance(a, b);
  if (len == 0.0) return 0.0;
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double t = 0.5 * (1.0 + nodes[k]);
    acc += weights[k] * metric.sqrt_q_at(a + t * (b - a));
  }
  return 0.5 * len * acc;
}

DistancePatch::DistancePatch(Point source, int grid_n, long i0, long j0, int width, std::vector<double> d)
    : source_(source), grid_n_(grid_n), h_(1.0 / grid_n), i0_(i0), j0_(j0), width_(width), d_(std::move(d)) {}

double DistancePatch::node(long i, long j) const {
  if (periodic()) return d_[floor_mod(j, grid_n_) * grid_n_ + floor_mod(i, grid_n_)];
  const long li = i - i0_;
  const long lj = j - j0_;
  if (li < 0 || lj < 0 || li >= width_ || lj >= width_) return inf;
  return d_[lj * width_ + li];
}

double DistancePatch::operator()(Point p) const {
  if (!periodic()) {
    // Bring p to the period image nearest the source.
    p.x += std::round(source_.x - p.x);
    p.y += std::round(source_.y - p.y);
  }
  const double u = p.x / h_;
  const double v = p.y / h_;
  const long i = static_cast<long>(std::floor(u));
  const long j = static_cast<long>(std::floor(v));
  const double fx = u - i;
  const double fy = v - j;
  const double a = node(i, j), b = node(i + 1, j), c = node(i, j + 1), d = node(i + 1, j + 1);
  if (a == inf || b == inf || c == inf || d == inf) return inf;
  return (1 - fy) * ((1 - fx) * a + fx * b) + fy * ((1 - fx) * c + fx * d);
}

GridField DistancePatch::to_grid() const {
  auto g = GridField::torus(grid_n_);
  for (int j = 0; j < grid_n_; ++j)
    for (int i = 0; i < grid_n_; ++i) g.at(i, j) = inf;
  if (periodic()) {
    for (int j = 0; j < grid_n_; ++j)
      for (int i = 0; i < grid_n_; ++i) g.at(i, j) = d_[j * grid_n_ + i];
    return g;
  }
  for (int lj = 0; lj < width_; ++lj)
    for (int li = 0; li < width_; ++li) {
      const long i = floor_mod(i0_ + li, grid_n_);
      const long j = floor_mod(j0_ + lj, grid_n_);
      g.at(i, j) = std::min(g.at(i, j), d_[lj * width_ + li]);
    }
  return g;
}

DistancePatch geodesic_patch(const ConformalMetric& metric, Point source, double max_radius) {
  const int n = metric.grid_n();
  const double h = metric.spacing();
  const GridField& q = metric.q();
  if (!(source.x >= 0.0 && source.x < 1.0 && source.y >= 0.0 && source.y < 1.0))
    throw ValidationError("geodesic source must lie in [0,1)^2");

  int width = n;
  long i0 = 0, j0 = 0;
  const bool bounded = std::isfinite(max_radius);
  if (bounded) {
    const long half = static_cast<long>(std::ceil((max_radius / std::sqrt(metric.q_minus()) + 4 * h) / h)) + 1;
    if (2 * half + 1 < n) {
      width = static_cast<int>(2 * half + 1);
      i0 = std::lround(source.x / h) - half;
      j0 = std::lround(source.y / h) - half;
    }
  }
  const bool periodic = width >= n;
  const std::size_t total = static_cast<std::size_t>(width) * width;
  std::vector<double> d(total, inf);
  std::vector<std::uint8_t> done(total, 0);

  // Local (li, lj) -> unwrapped lattice index and speed.
  auto speed = [&](long li, long lj) { return std::sqrt(q.at_wrapped(static_cast<int>(i0 + li), static_cast<int>(j0 + lj))); };
  auto neighbour = [&](long li, long lj, int di, int dj, long& oi, long& oj) {
    oi = li + di;
    oj = lj + dj;
    if (periodic) {
      oi = floor_mod(oi, width);
      oj = floor_mod(oj, width);
      return true;
    }
    return oi >= 0 && oj >= 0 && oi < width && oj < width;
  };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  // Seed every node within two cells of the source with the locally flat
  // distance, nearest period image.
  const double sq_src = metric.sqrt_q_at(source);
  const long ci = std::lround(source.x / h), cj = std::lround(source.y / h);
  for (long dj = -3; dj <= 3; ++dj)
    for (long di = -3; di <= 3; ++di) {
      long li = ci + di - i0, lj = cj + dj - j0;
      if (periodic) {
        li = floor_mod(li, width);
        lj = floor_mod(lj, width);
      } else if (li < 0 || lj < 0 || li >= width || lj >= width) {
        continue;
      }
      const Point nodep{(ci + di) * h, (cj + dj) * h};
      const double e = distance(nodep, source);
      if (e > 2.0 * h) continue;
      const std::size_t k = lj * width + li;
      d[k] = 0.5 * (sq_src + speed(li, lj)) * e;
      done[k] = 1;
    }

  static constexpr int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  auto relax = [&](long li, long lj) {
    const std::size_t k = lj * width + li;
    if (done[k]) return;
    double a = inf, b = inf;
    long oi, oj;
    if (neighbour(li, lj, 1, 0, oi, oj) && done[oj * width + oi]) a = std::min(a, d[oj * width + oi]);
    if (neighbour(li, lj, -1, 0, oi, oj) && done[oj * width + oi]) a = std::min(a, d[oj * width + oi]);
    if (neighbour(li, lj, 0, 1, oi, oj) && done[oj * width + oi]) b = std::min(b, d[oj * width + oi]);
    if (neighbour(li, lj, 0, -1, oi, oj) && done[oj * width + oi]) b = std::min(b, d[oj * width + oi]);
    if (a == inf && b == inf) return;
    const double cand = eikonal_update(a, b, speed(li, lj) * h);
    if (cand < d[k]) {
      d[k] = cand;
      heap.push({cand, k});
    }
  };

  for (std::size_t k = 0; k < total; ++k)
    if (done[k]) {
      const long li = static_cast<long>(k % width), lj = static_cast<long>(k / width);
      for (const auto& dir : dirs) {
        long oi, oj;
        if (neighbour(li, lj, dir[0], dir[1], oi, oj)) relax(oi, oj);
      }
    }

  const double stop = bounded ? max_radius + 3.0 * h * std::sqrt(metric.q_plus()) : inf;
  while (!heap.empty()) {
    const auto [val, k] = heap.top();
    heap.pop();
    if (done[k] || val > d[k]) continue;
    if (val > stop) break;
    done[k] = 1;
    const long li = static_cast<long>(k % width), lj = static_cast<long>(k / width);
    for (const auto& dir : dirs) {
      long oi, oj;
      if (neighbour(li, lj, dir[0], dir[1], oi, oj)) relax(oi, oj);
    }
  }
  for (std::size_t k = 0; k < total; ++k)
    if (!done[k]) d[k] = inf;

  return DistancePatch(source, n, i0, j0, width, std::move(d));
}

GridField geodesic_distance(const ConformalMetric& metric, Point p) {
  return geodesic_patch(metric, p, inf).to_grid();
}

Box MetricDisk::bounds() const {
  const Point c = center();
  const double e = reach();
  return {c.x - e, c.y - e, c.x + e, c.y + e};
}

bool MetricDisk::may_intersect(const Box& b) const { return EuclideanDisk{center(), reach()}.may_intersect(b); }

void MetricDisk::boundary_points(double /*step*/, std::vector<Point>& out) const {
  const double h = distance->spacing();
  const Box b = bounds();
  const long i_lo = static_cast<long>(std::floor(b.xmin / h)), i_hi = static_cast<long>(std::ceil(b.xmax / h));
  const long j_lo = static_cast<long>(std::floor(b.ymin / h)), j_hi = static_cast<long>(std::ceil(b.ymax / h));
  const DistancePatch& dp = *distance;
  for (long j = j_lo; j <= j_hi; ++j)
    for (long i = i_lo; i <= i_hi; ++i) {
      const double d0 = dp.node(i, j) - radius;
      if (!std::isfinite(d0)) continue;
      const double dx = dp.node(i + 1, j) - radius;
      if (std::isfinite(dx) && (d0 <= 0) != (dx <= 0)) out.push_back({(i + d0 / (d0 - dx)) * h, j * h});
      const double dy = dp.node(i, j + 1) - radius;
      if (std::isfinite(dy) && (d0 <= 0) != (dy <= 0)) out.push_back({i * h, (j + d0 / (d0 - dy)) * h});
    }
}

MetricDisk make_metric_disk(const ConformalMetric& metric, Point center, double radius) {
  Point c{wrap_unit(center.x), wrap_unit(center.y)};
  auto patch = std::make_shared<const DistancePatch>(geodesic_patch(metric, c, radius));
  return {std::move(patch), radius, 1.0 / std::sqrt(metric.q_minus())};
}

}  // namespace ngl::surface
