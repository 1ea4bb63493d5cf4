#include "ngl/regions.hpp"

namespace ngl {

namespace {

void circle_points(Point c, double r, double step, std::vector<Point>& out) {
  if (r <= 0.0) {
    out.push_back(c);
    return;
  }
  const int n = std::max(16, static_cast<int>(std::ceil(two_pi * r / step)));
  for (int k = 0; k < n; ++k) {
    const double t = two_pi * k / n;
    out.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
  }
}

}  // namespace

void EuclideanDisk::boundary_points(double step, std::vector<Point>& out) const {
  circle_points(center, radius, step, out);
}

void Annulus::boundary_points(double step, std::vector<Point>& out) const {
  circle_points(center, inner, step, out);
  circle_points(center, outer, step, out);
}

}  // namespace ngl
