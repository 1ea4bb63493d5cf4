#include "ngl/svg.hpp"

#include <cstdio>

namespace ngl::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

Box padded(Box b) {
  double w = b.width(), h = b.height();
  if (!(w > 0.0)) w = 1.0;
  if (!(h > 0.0)) h = 1.0;
  return {b.xmin - 0.05 * w, b.ymin - 0.05 * h, b.xmin + 1.05 * w, b.ymin + 1.05 * h};
}

}  // namespace

Canvas::Canvas(Box view, int pixels) : view_(view), pixels_(pixels) {
  if (!(view.width() > 0.0 && view.height() > 0.0)) throw ValidationError("svg view box must have positive size");
}

double Canvas::px(double x) const { return margin_ + (x - view_.xmin) / view_.width() * pixels_; }
double Canvas::py(double y) const { return margin_ + (view_.ymax - y) / view_.height() * pixels_; }

void Canvas::axes(const std::string& xlabel, const std::string& ylabel) {
  const double x0 = margin_, y0 = margin_ + pixels_, x1 = margin_ + pixels_;
  body_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) +
           "\" stroke=\"black\"/>\n";
  body_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(margin_) +
           "\" stroke=\"black\"/>\n";
  body_ += "<text x=\"" + num(x0) + "\" y=\"" + num(y0 + 18) + "\" font-size=\"12\">" + num(view_.xmin) + "</text>\n";
  body_ += "<text x=\"" + num(x1) + "\" y=\"" + num(y0 + 18) + "\" font-size=\"12\" text-anchor=\"end\">" +
           num(view_.xmax) + "</text>\n";
  body_ += "<text x=\"" + num(x0 - 4) + "\" y=\"" + num(y0) + "\" font-size=\"12\" text-anchor=\"end\">" +
           num(view_.ymin) + "</text>\n";
  body_ += "<text x=\"" + num(x0 - 4) + "\" y=\"" + num(margin_ + 12) + "\" font-size=\"12\" text-anchor=\"end\">" +
           num(view_.ymax) + "</text>\n";
  body_ += "<text x=\"" + num(margin_ + pixels_ / 2.0) + "\" y=\"" + num(y0 + 36) +
           "\" font-size=\"14\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
  body_ += "<text x=\"" + num(14) + "\" y=\"" + num(margin_ + pixels_ / 2.0) +
           "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 14 " + num(margin_ + pixels_ / 2.0) +
           ")\">" + escape(ylabel) + "</text>\n";
}

void Canvas::line(Point a, Point b, const std::string& stroke, double width) {
  body_ += "<line x1=\"" + num(px(a.x)) + "\" y1=\"" + num(py(a.y)) + "\" x2=\"" + num(px(b.x)) + "\" y2=\"" +
           num(py(b.y)) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

void Canvas::rect(Point corner, double w, double h, const std::string& fill, const std::string& stroke) {
  body_ += "<rect x=\"" + num(px(corner.x)) + "\" y=\"" + num(py(corner.y + h)) + "\" width=\"" +
           num(w / view_.width() * pixels_) + "\" height=\"" + num(h / view_.height() * pixels_) + "\" fill=\"" + fill +
           "\" stroke=\"" + stroke + "\" stroke-width=\"0.5\"/>\n";
}

void Canvas::circle(Point c, double r, const std::string& fill, const std::string& stroke) {
  body_ += "<circle cx=\"" + num(px(c.x)) + "\" cy=\"" + num(py(c.y)) + "\" r=\"" + num(r / view_.width() * pixels_) +
           "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

void Canvas::dot(Point c, double pixel_radius, const std::string& fill) {
  body_ += "<circle cx=\"" + num(px(c.x)) + "\" cy=\"" + num(py(c.y)) + "\" r=\"" + num(pixel_radius) + "\" fill=\"" +
           fill + "\"/>\n";
}

void Canvas::text(Point at, const std::string& s) {
  body_ += "<text x=\"" + num(px(at.x)) + "\" y=\"" + num(py(at.y)) + "\" font-size=\"12\">" + escape(s) + "</text>\n";
}

std::string Canvas::str() const {
  const int size = pixels_ + 2 * margin_;
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size) + "\" height=\"" +
         std::to_string(size) + "\" viewBox=\"0 0 " + std::to_string(size) + " " + std::to_string(size) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

std::string nodal_plot(const nodal::NodalSet& set, Box view) {
  Canvas c(view);
  c.axes("x", "y");
  for (const auto& s : set.segments) c.line(s.a, s.b, "black");
  for (const Point& p : set.singular_points) c.dot(p, 3.0, "red");
  return c.str();
}

std::string tiling_plot(const tiling::TilingState& state) {
  const double h = tiling::p_half;
  Canvas c({-h, -h, h, h});
  c.axes("x", "y");
  for (const auto& level : state.slow)
    for (const auto& s : level) c.rect(state.corner(s), state.side(s), state.side(s), "#9ecae1", "#3182bd");
  for (const auto& s : state.rapid.back()) c.rect(state.corner(s), state.side(s), state.side(s), "#fc9272", "#de2d26");
  c.circle({0.0, 0.0}, h, "none", "black");
  return c.str();
}

std::string scatter_plot(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& xlabel,
                         const std::string& ylabel) {
  if (xs.size() != ys.size()) throw ValidationError("scatter plot needs as many x as y values");
  Box b{0.0, 0.0, 1.0, 1.0};
  if (!xs.empty()) {
    b = {xs[0], ys[0], xs[0], ys[0]};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      b.xmin = std::min(b.xmin, xs[i]);
      b.xmax = std::max(b.xmax, xs[i]);
      b.ymin = std::min(b.ymin, ys[i]);
      b.ymax = std::max(b.ymax, ys[i]);
    }
    b = padded(b);
  }
  Canvas c(b);
  c.axes(xlabel, ylabel);
  for (std::size_t i = 0; i < xs.size(); ++i) c.dot({xs[i], ys[i]}, 3.0, "#3182bd");
  return c.str();
}

std::string disk_configuration(const std::vector<Point>& centers, double delta, double a) {
  Box b{-delta, -delta, delta, delta};
  for (const Point& p : centers) {
    b.xmin = std::min(b.xmin, p.x - delta);
    b.xmax = std::max(b.xmax, p.x + delta);
    b.ymin = std::min(b.ymin, p.y - delta);
    b.ymax = std::max(b.ymax, p.y + delta);
  }
  const double side = std::max(b.width(), b.height());
  Canvas c(padded({b.xmin, b.ymin, b.xmin + side, b.ymin + side}));
  c.axes("x", "y");
  for (const Point& p : centers) {
    c.circle(p, delta, "none", "black");
    c.circle(p, (1 - a) * delta, "#fdd0a2", "#e6550d");
    c.circle(p, (1 - 2 * a) * delta, "#d9d9d9", "#636363");
  }
  return c.str();
}

}  // namespace ngl::svg
