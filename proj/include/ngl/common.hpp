#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ngl {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Failures split the way the CLI reports them: bad input (exit 2) versus a
// numerical method that could not deliver (exit 3).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double distance(Point a, Point b) { return norm(a - b); }

// Axis-aligned box [xmin, xmax] x [ymin, ymax].
struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

// Flat distance on the unit torus: minimum over period shifts.
inline double torus_distance(Point a, Point b) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  dx -= std::floor(dx);
  dy -= std::floor(dy);
  dx = std::min(dx, 1.0 - dx);
  dy = std::min(dy, 1.0 - dy);
  return std::hypot(dx, dy);
}

inline double wrap_unit(double v) { return v - std::floor(v); }

}  // namespace ngl
