#pragma once

#include <string>
#include <vector>

#include "ngl/common.hpp"
#include "ngl/nodal.hpp"
#include "ngl/tiling.hpp"

namespace ngl::svg {

// A 600 x 600 canvas (plus margins) showing the world box `view`, y up.
// Numbers are printed with a fixed 6 significant digits so output is
// byte-stable across runs.
class Canvas {
 public:
  explicit Canvas(Box view, int pixels = 600);

  void axes(const std::string& xlabel, const std::string& ylabel);
  void line(Point a, Point b, const std::string& stroke, double width = 1.0);
  void rect(Point corner, double w, double h, const std::string& fill, const std::string& stroke = "none");
  void circle(Point c, double r, const std::string& fill, const std::string& stroke = "none");
  void dot(Point c, double pixel_radius, const std::string& fill);
  void text(Point at, const std::string& s);
  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  Box view_;
  int pixels_;
  int margin_ = 50;
  std::string body_;
};

std::string nodal_plot(const nodal::NodalSet& set, Box view);
/// Slow squares in one fill, remaining rapid squares in another, over the outline of (1/60) D.
std::string tiling_plot(const tiling::TilingState& state);
std::string scatter_plot(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& xlabel,
                         const std::string& ylabel);
/// Disks D_nu (delta), their inner disks (1 - 2a) delta and the annuli between (1 - 2a) and (1 - a).
std::string disk_configuration(const std::vector<Point>& centers, double delta, double a);

}  // namespace ngl::svg
