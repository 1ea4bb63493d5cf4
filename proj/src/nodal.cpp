#include "ngl/nodal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>

#include "ngl/parallel.hpp"

namespace ngl::nodal {

namespace {

// Zero of the linear interpolant between p (value a) and q (value b).
Point edge_zero(Point p, Point q, double a, double b) {
  const double t = a / (a - b);
  return p + t * (q - p);
}

}  // namespace

NodalSet extract_nodal_set(const GridField& f) {
  if (!f.all_finite()) throw ValidationError("field has non-finite samples");
  const int n = f.n();
  const bool periodic = f.periodic();
  const int cells = periodic ? n : n - 1;
  std::vector<std::vector<Segment>> rows(cells);

  parallel_for(cells, [&](std::size_t row) {
    const int j = static_cast<int>(row);
    auto& out = rows[row];
    for (int i = 0; i < cells; ++i) {
      if (!periodic && !(f.in_mask(i, j) && f.in_mask(i + 1, j) && f.in_mask(i, j + 1) && f.in_mask(i + 1, j + 1)))
        continue;
      const Point p0 = f.node(i, j), p1 = f.node(i + 1, j), p2 = f.node(i + 1, j + 1), p3 = f.node(i, j + 1);
      const double v0 = f.at_wrapped(i, j), v1 = f.at_wrapped(i + 1, j);
      const double v2 = f.at_wrapped(i + 1, j + 1), v3 = f.at_wrapped(i, j + 1);
      const bool s0 = v0 >= 0, s1 = v1 >= 0, s2 = v2 >= 0, s3 = v3 >= 0;
      // Edges: 0 bottom (p0-p1), 1 right (p1-p2), 2 top (p3-p2), 3 left (p0-p3).
      Point e[4];
      bool has[4] = {s0 != s1, s1 != s2, s3 != s2, s0 != s3};
      if (has[0]) e[0] = edge_zero(p0, p1, v0, v1);
      if (has[1]) e[1] = edge_zero(p1, p2, v1, v2);
      if (has[2]) e[2] = edge_zero(p3, p2, v3, v2);
      if (has[3]) e[3] = edge_zero(p0, p3, v0, v3);
      const int count = has[0] + has[1] + has[2] + has[3];
      if (count == 2) {
        int first = -1, second = -1;
        for (int k = 0; k < 4; ++k)
          if (has[k]) (first < 0 ? first : second) = k;
        out.push_back({e[first], e[second]});
      } else if (count == 4) {
        const bool centre = 0.25 * (v0 + v1 + v2 + v3) >= 0;
        if (centre == s0) {
          // p0 and p2 are joined through the centre: cut off p1 and p3.
          out.push_back({e[0], e[1]});
          out.push_back({e[2], e[3]});
        } else {
          out.push_back({e[0], e[3]});
          out.push_back({e[1], e[2]});
        }
      }
    }
  });

  NodalSet set;
  set.periodic = periodic;
  for (auto& r : rows) set.segments.insert(set.segments.end(), r.begin(), r.end());
  for (const auto& s : set.segments) set.euclidean_length += distance(s.a, s.b);
  return set;
}

Lengths nodal_length(const NodalSet& set, const surface::ConformalMetric* metric) {
  Lengths out;
  for (const auto& s : set.segments) {
    out.euclidean += distance(s.a, s.b);
    if (metric) out.metric += surface::metric_length(*metric, s.a, s.b);
  }
  if (!metric) out.metric = out.euclidean;
  return out;
}

std::vector<Point> singular_points(const GridField& f, double tol_f, double tol_g) {
  if (!(tol_f > 0.0) || !(tol_g > 0.0)) throw ValidationError("singular point tolerances must be positive");
  const int n = f.n();
  const double h = f.spacing();
  const bool periodic = f.periodic();
  // Central-difference derivatives (one-sided on planar borders).
  GridField gx = f, gy = f, gxx = f, gyy = f, gxy = f;
  auto val = [&](int i, int j) { return f.at_wrapped(i, j); };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int il = periodic ? i - 1 : std::max(i - 1, 0), ir = periodic ? i + 1 : std::min(i + 1, n - 1);
      const int jl = periodic ? j - 1 : std::max(j - 1, 0), jr = periodic ? j + 1 : std::min(j + 1, n - 1);
      gx.at(i, j) = (val(ir, j) - val(il, j)) / ((ir - il) * h);
      gy.at(i, j) = (val(i, jr) - val(i, jl)) / ((jr - jl) * h);
      gxx.at(i, j) = (ir - il == 2) ? (val(ir, j) - 2 * val(i, j) + val(il, j)) / (h * h) : 0.0;
      gyy.at(i, j) = (jr - jl == 2) ? (val(i, jr) - 2 * val(i, j) + val(i, jl)) / (h * h) : 0.0;
      gxy.at(i, j) = (val(ir, jr) - val(ir, jl) - val(il, jr) + val(il, jl)) / ((ir - il) * (jr - jl) * h * h);
    }
  double fmax = 0.0, gmax = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (f.in_mask(i, j)) {
        fmax = std::max(fmax, std::abs(f.at(i, j)));
        gmax = std::max(gmax, std::hypot(gx.at(i, j), gy.at(i, j)));
      }
  if (fmax == 0.0 || gmax == 0.0) return {};

  const int cells = periodic ? n : n - 1;
  struct Hit {
    int i, j;
    Point p;
  };
  std::vector<Hit> hits;
  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i) {
      if (!(f.in_mask(i, j) && f.in_mask((i + 1) % n, j) && f.in_mask(i, (j + 1) % n) &&
            f.in_mask((i + 1) % n, (j + 1) % n)))
        continue;
      auto bil = [&](const GridField& g, double s, double t) {
        return (1 - t) * ((1 - s) * g.at_wrapped(i, j) + s * g.at_wrapped(i + 1, j)) +
               t * ((1 - s) * g.at_wrapped(i, j + 1) + s * g.at_wrapped(i + 1, j + 1));
      };
      // Newton on the bilinear gradient, local coordinates (s, t) in [0,1]^2.
      double s = 0.5, t = 0.5;
      for (int it = 0; it < 20; ++it) {
        const double ux = bil(gx, s, t), uy = bil(gy, s, t);
        const double a = (1 - t) * (gx.at_wrapped(i + 1, j) - gx.at_wrapped(i, j)) +
                         t * (gx.at_wrapped(i + 1, j + 1) - gx.at_wrapped(i, j + 1));
        const double b = (1 - s) * (gx.at_wrapped(i, j + 1) - gx.at_wrapped(i, j)) +
                         s * (gx.at_wrapped(i + 1, j + 1) - gx.at_wrapped(i + 1, j));
        const double c = (1 - t) * (gy.at_wrapped(i + 1, j) - gy.at_wrapped(i, j)) +
                         t * (gy.at_wrapped(i + 1, j + 1) - gy.at_wrapped(i, j + 1));
        const double d = (1 - s) * (gy.at_wrapped(i, j + 1) - gy.at_wrapped(i, j)) +
                         s * (gy.at_wrapped(i + 1, j + 1) - gy.at_wrapped(i + 1, j));
        const double det = a * d - b * c;
        if (det == 0.0) break;
        const double ds = (d * ux - b * uy) / det, dt = (a * uy - c * ux) / det;
        s = std::clamp(s - ds, 0.0, 1.0);
        t = std::clamp(t - dt, 0.0, 1.0);
        if (std::abs(ds) + std::abs(dt) < 1e-12) break;
      }
      const double grad = std::hypot(bil(gx, s, t), bil(gy, s, t));
      if (grad >= tol_g * gmax) continue;
      // Quadratic Taylor estimate of f from the nearest corner.
      const int ci = i + (s > 0.5), cj = j + (t > 0.5);
      const double dx = (i + s - ci) * h, dy = (j + t - cj) * h;
      const double fv = f.at_wrapped(ci, cj) + gx.at_wrapped(ci, cj) * dx + gy.at_wrapped(ci, cj) * dy +
                        0.5 * (gxx.at_wrapped(ci, cj) * dx * dx + 2 * gxy.at_wrapped(ci, cj) * dx * dy +
                               gyy.at_wrapped(ci, cj) * dy * dy);
      if (std::abs(fv) >= tol_f * fmax) continue;
      const Point o = f.node(i, j);
      hits.push_back({i, j, {o.x + s * h, o.y + t * h}});
    }

  // Union-find over 8-adjacent flagged cells (periodic on the torus).
  std::vector<int> parent(hits.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto adjacent = [&](const Hit& a, const Hit& b) {
    int di = std::abs(a.i - b.i), dj = std::abs(a.j - b.j);
    if (periodic) {
      di = std::min(di, n - di);
      dj = std::min(dj, n - dj);
    }
    return di <= 1 && dj <= 1;
  };
  for (std::size_t a = 0; a < hits.size(); ++a)
    for (std::size_t b = a + 1; b < hits.size(); ++b)
      if (adjacent(hits[a], hits[b])) parent[find(static_cast<int>(a))] = find(static_cast<int>(b));

  std::vector<Point> out;
  std::vector<int> root_index(hits.size(), -1);
  std::vector<Point> sums;
  std::vector<int> counts;
  std::vector<Point> anchor;
  for (std::size_t a = 0; a < hits.size(); ++a) {
    const int r = find(static_cast<int>(a));
    if (root_index[r] < 0) {
      root_index[r] = static_cast<int>(sums.size());
      sums.push_back({0, 0});
      counts.push_back(0);
      anchor.push_back(hits[a].p);
    }
    const int k = root_index[r];
    Point p = hits[a].p;
    if (periodic) {
      p.x += std::round(anchor[k].x - p.x);
      p.y += std::round(anchor[k].y - p.y);
    }
    sums[k] = sums[k] + p;
    ++counts[k];
  }
  for (std::size_t k = 0; k < sums.size(); ++k) {
    Point c = (1.0 / counts[k]) * sums[k];
    if (periodic) c = {wrap_unit(c.x), wrap_unit(c.y)};
    out.push_back(c);
  }
  return out;
}

int segment_circle_crossings(const Segment& seg, Point center, double radius) {
  const Point d = seg.b - seg.a, m = seg.a - center;
  const double qa = dot(d, d);
  if (qa == 0.0) return 0;
  const double qb = 2.0 * dot(d, m), qc = dot(m, m) - radius * radius;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double t1 = (-qb - sq) / (2.0 * qa), t2 = (-qb + sq) / (2.0 * qa);
  int count = 0;
  if (t1 >= 0.0 && t1 < 1.0) ++count;
  if (disc > 0.0 && t2 >= 0.0 && t2 < 1.0) ++count;
  return count;
}

double segment_length_in_disk(const Segment& seg, Point center, double radius) {
  const Point d = seg.b - seg.a, m = seg.a - center;
  const double qa = dot(d, d);
  if (qa == 0.0) return 0.0;
  const double qb = 2.0 * dot(d, m), qc = dot(m, m) - radius * radius;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(0.0, (-qb - sq) / (2.0 * qa)), t1 = std::min(1.0, (-qb + sq) / (2.0 * qa));
  return t1 > t0 ? (t1 - t0) * std::sqrt(qa) : 0.0;
}

int circle_intersections(const NodalSet& set, Point center, double radius) {
  int count = 0;
  for (const auto& seg : set.segments) {
    Segment s = seg;
    if (set.periodic) {
      const Point mid = 0.5 * (s.a + s.b);
      const Point shift{std::round(center.x - mid.x), std::round(center.y - mid.y)};
      s = {s.a + shift, s.b + shift};
    }
    count += segment_circle_crossings(s, center, radius);
  }
  return count;
}

double clipped_length_in_square(const std::vector<Segment>& segments, Point corner, double side) {
  const double x0 = corner.x, x1 = corner.x + side, y0 = corner.y, y1 = corner.y + side;
  double total = 0.0;
  for (const auto& s : segments) {
    // Liang-Barsky clip to the closed square, then drop pieces lying on the
    // excluded upper/right edges so adjacent squares never share length.
    double t0 = 0.0, t1 = 1.0;
    const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {s.a.x - x0, x1 - s.a.x, s.a.y - y0, y1 - s.a.y};
    bool reject = false;
    for (int k = 0; k < 4 && !reject; ++k) {
      if (p[k] == 0.0) {
        if (q[k] < 0.0) reject = true;
      } else {
        const double r = q[k] / p[k];
        if (p[k] < 0.0)
          t0 = std::max(t0, r);
        else
          t1 = std::min(t1, r);
      }
    }
    if (reject || t1 <= t0) continue;
    if ((dx == 0.0 && s.a.x == x1) || (dy == 0.0 && s.a.y == y1)) continue;
    total += (t1 - t0) * std::hypot(dx, dy);
  }
  return total;
}

double clipped_length_in_disk(const std::vector<Segment>& segments, Point center, double radius) {
  double total = 0.0;
  for (const auto& s : segments) total += segment_length_in_disk(s, center, radius);
  return total;
}

}  // namespace ngl::nodal
