#include "ngl/carleman.hpp"

#include <limits>
#include <type_traits>

#include "ngl/rng.hpp"

namespace ngl::carleman {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double smoothstep5(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

// Fourth-order central first derivative along x (axis 0) or y (axis 1).
template <class Scalar>
BasicGridField<Scalar> first_derivative(const BasicGridField<Scalar>& u, int axis) {
  auto out = BasicGridField<Scalar>::planar(u.n(), u.origin(), u.side());
  const int n = u.n();
  const double c = 1.0 / (12.0 * u.spacing());
  for (int iy = 2; iy < n - 2; ++iy)
    for (int ix = 2; ix < n - 2; ++ix) {
      const int sx = axis == 0, sy = axis == 1;
      out.at(ix, iy) = c * (-u.at(ix + 2 * sx, iy + 2 * sy) + 8.0 * u.at(ix + sx, iy + sy) -
                            8.0 * u.at(ix - sx, iy - sy) + u.at(ix - 2 * sx, iy - 2 * sy));
    }
  return out;
}

// Grid over the bump supports with a few spare nodes on every side.
GridField support_grid(const TestFunction& f, double spacing) {
  const Box b = f.support();
  const double h = spacing > 0.0 ? spacing : f.min_radius() / 40.0;
  const double side = std::max(b.width(), b.height()) + 8.0 * h;
  const int n = static_cast<int>(std::ceil(side / h)) + 1;
  if (n > 8000) throw ValidationError("test-function grid would exceed 8000 nodes per side");
  const Point o{0.5 * (b.xmin + b.xmax) - 0.5 * (n - 1) * h, 0.5 * (b.ymin + b.ymax) - 0.5 * (n - 1) * h};
  return GridField::planar(n, o, (n - 1) * h);
}

template <class Scalar>
void add_bumps(BasicGridField<Scalar>& g, const TestFunction& f, bool real_part) {
  const double h = g.spacing();
  const Point o = g.origin();
  for (const Bump& b : f.bumps) {
    const int i0 = std::max(0, static_cast<int>(std::floor((b.center.x - b.radius - o.x) / h)));
    const int i1 = std::min(g.n() - 1, static_cast<int>(std::ceil((b.center.x + b.radius - o.x) / h)));
    const int j0 = std::max(0, static_cast<int>(std::floor((b.center.y - b.radius - o.y) / h)));
    const int j1 = std::min(g.n() - 1, static_cast<int>(std::ceil((b.center.y + b.radius - o.y) / h)));
    const Complex amp = real_part ? Complex(b.amp.real(), 0.0) : b.amp;
    for (int iy = j0; iy <= j1; ++iy)
      for (int ix = i0; ix <= i1; ++ix) {
        const Point p = g.node(ix, iy);
        const double s = dot(p - b.center, p - b.center) / (b.radius * b.radius);
        if (s >= 1.0) continue;
        const Complex v = amp * std::exp(1.0 - 1.0 / (1.0 - s));
        if constexpr (std::is_same_v<Scalar, double>)
          g.at(ix, iy) += v.real();
        else
          g.at(ix, iy) += v;
      }
  }
}

bool near_center(const Weight& w, Point z, double r) {
  for (const Point& c : w.centers)
    if (distance(z, c) <= r) return true;
  return false;
}

}  // namespace

RadialFunction default_h(double a, double a3) {
  return [a, a3](double r) { return a3 * (1.0 - smoothstep5((r - (1.0 - a)) / (0.5 * a))); };
}

RadialFunction constant_h(double c) {
  return [c](double) { return c; };
}

RadialProfile::RadialProfile(RadialFunction h, double r_min, double r_max, std::vector<double> u,
                             std::vector<double> du)
    : h_(std::move(h)), r_min_(r_min), r_max_(r_max), u_(std::move(u)), du_(std::move(du)) {
  dr_ = (r_max_ - r_min_) / static_cast<double>(u_.size() - 1);
}

double RadialProfile::log_psi(double r) const {
  if (!(r >= r_min_ - 1e-12 && r <= r_max_ + 1e-12)) return nan;
  const std::size_t last = u_.size() - 2;
  const std::size_t k = std::min(last, static_cast<std::size_t>(std::max(0.0, std::floor((r - r_min_) / dr_))));
  const double s = (r - (r_min_ + k * dr_)) / dr_;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * u_[k] + (s3 - 2 * s2 + s) * dr_ * du_[k] + (-2 * s3 + 3 * s2) * u_[k + 1] +
         (s3 - s2) * dr_ * du_[k + 1];
}

double RadialProfile::dlog_psi(double r) const {
  if (!(r >= r_min_ - 1e-12 && r <= r_max_ + 1e-12)) return nan;
  const std::size_t last = u_.size() - 2;
  const std::size_t k = std::min(last, static_cast<std::size_t>(std::max(0.0, std::floor((r - r_min_) / dr_))));
  const double s = (r - (r_min_ + k * dr_)) / dr_;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * u_[k] + (-6 * s2 + 6 * s) * u_[k + 1]) / dr_ + (3 * s2 - 4 * s + 1) * du_[k] +
         (3 * s2 - 2 * s) * du_[k + 1];
}

RadialProfile solve_radial(const RadialFunction& h, double r_min, double r_max, int steps) {
  if (!(r_min > 0.0 && r_min < 1.0 && r_max >= 1.0)) throw ValidationError("radial range must satisfy 0 < r_min < 1 <= r_max");
  if (steps < 10) throw ValidationError("radial solver needs at least 10 steps per unit");
  const int nb = static_cast<int>(std::ceil((1.0 - r_min) * steps));
  const double dr = (1.0 - r_min) / nb;
  const int nf = static_cast<int>(std::ceil((r_max - 1.0) / dr - 1e-9));
  const int total = nb + nf + 1;
  std::vector<double> u(total), du(total);
  auto rhs = [&](double r, double v) { return h(r) - v / r; };
  // Node nb sits at r = 1.
  auto march = [&](int dir, int count) {
    double uu = 0.0, vv = 0.0, r = 1.0;
    const double s = dir * dr;
    for (int k = 1; k <= count; ++k) {
      const double k1u = vv, k1v = rhs(r, vv);
      const double k2u = vv + 0.5 * s * k1v, k2v = rhs(r + 0.5 * s, vv + 0.5 * s * k1v);
      const double k3u = vv + 0.5 * s * k2v, k3v = rhs(r + 0.5 * s, vv + 0.5 * s * k2v);
      const double k4u = vv + s * k3v, k4v = rhs(r + s, vv + s * k3v);
      uu += s / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
      vv += s / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      r = 1.0 + k * s;
      u[nb + dir * k] = uu;
      du[nb + dir * k] = vv;
    }
  };
  march(-1, nb);
  march(+1, nf);
  return RadialProfile(h, 1.0 - nb * dr, 1.0 + nf * dr, std::move(u), std::move(du));
}

RadialProfile build_psi0(double a, const RadialFunction& h, double a3, int steps) {
  if (!(a > 0.0 && a < 0.25)) throw ValidationError("psi0 needs 0 < a < 1/4");
  if (!(a3 > 0.0)) throw ValidationError("psi0 needs a3 > 0");
  const int m = 4000;
  for (int k = 0; k <= m; ++k) {
    const double r = (1.0 - 2 * a) + (1.0 + 2 * a) * k / m;  // [1 - 2a, 2]
    const double v = h(r);
    if (!(v >= 0.0)) throw ValidationError("psi0 profile h must be nonnegative");
    if (r > 1.0 - 2 * a && r < 1.0 - a && v < a3 * (1.0 - 1e-12))
      throw ValidationError("psi0 profile h must be at least a3 on (1 - 2a, 1 - a)");
    if (r > 1.0 - 0.5 * a && v != 0.0) throw ValidationError("psi0 profile h must vanish beyond 1 - a/2");
  }
  return solve_radial(h, 1.0 - 2 * a, 2.0, steps);
}

Psi0Report check_psi0(const RadialProfile& p, double a) {
  Psi0Report rep;
  rep.a1 = std::numeric_limits<double>::infinity();
  rep.min_laplacian_annulus = std::numeric_limits<double>::infinity();
  const int m = 20000;
  const double e = (p.r_max() - p.r_min()) / m;
  for (int k = 0; k <= m; ++k) {
    const double r = p.r_min() + k * e;
    const double v = p.psi(r);
    rep.a1 = std::min(rep.a1, v);
    rep.a2 = std::max(rep.a2, v);
    if (r > 1.0) rep.max_outside = std::max(rep.max_outside, std::abs(p.log_psi(r)));
    if (k == 0 || k == m) continue;
    const double d2 = (p.log_psi(r + e) - 2 * p.log_psi(r) + p.log_psi(r - e)) / (e * e);
    const double lap = d2 + p.dlog_psi(r) / r;
    rep.max_residual = std::max(rep.max_residual, std::abs(lap - p.laplacian(r)));
    if (r > 1.0 - 2 * a && r < 1.0 - a) rep.min_laplacian_annulus = std::min(rep.min_laplacian_annulus, lap);
  }
  rep.value_at_1 = p.log_psi(1.0);
  rep.slope_at_1 = p.dlog_psi(1.0);
  return rep;
}

// ---------------------------------------------------------------------------

bool Weight::defined(Point z) const {
  for (const Point& c : centers) {
    const double r = distance(z, c);
    if (use_psi0 && r < (1.0 - 2 * a) * delta) return false;
    if (use_P && r == 0.0) return false;
  }
  return true;
}

bool Weight::in_annuli(Point z) const {
  for (const Point& c : centers) {
    const double r = distance(z, c);
    if (r > (1.0 - 2 * a) * delta && r < (1.0 - a) * delta) return true;
  }
  return false;
}

double Weight::log_phi0(Point z) const {
  double s = 0.0;
  for (const Point& c : centers) {
    const double r = distance(z, c) / delta;
    if (r < 1.0) s += psi0.log_psi(r);
  }
  return s;
}

double Weight::lap_log_phi0(Point z) const {
  double s = 0.0;
  for (const Point& c : centers) {
    const double r = distance(z, c) / delta;
    if (r < 1.0) s += psi0.laplacian(r) / (delta * delta);
  }
  return s;
}

double Weight::log_abs_P2(Point z) const {
  double s = 0.0;
  for (const Point& c : centers) s += std::log(dot(z - c, z - c));
  return s;
}

double Weight::log_phi(Point z) const {
  double s = t * dot(z, z);
  if (use_psi0) s += log_phi0(z);
  if (use_P) s -= log_abs_P2(z);
  return s;
}

double Weight::lap_log_phi(Point z) const { return 4.0 * t + (use_psi0 ? lap_log_phi0(z) : 0.0); }

Weight build_weight(std::vector<Point> centers, double delta, double a, double t, bool use_psi0, bool use_P,
                    const RadialFunction& h) {
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  if (!(a > 0.0 && a < 0.25)) throw ValidationError("a must lie in (0, 1/4)");
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if (!(distance(centers[i], centers[j]) > 2 * delta)) throw ValidationError("disk centres must be more than 2 delta apart");
  Weight w;
  w.centers = std::move(centers);
  w.delta = delta;
  w.a = a;
  w.t = t;
  w.use_psi0 = use_psi0;
  w.use_P = use_P;
  if (use_psi0) w.psi0 = build_psi0(a, h ? h : default_h(a));
  return w;
}

WeightFields sample_weight(const Weight& w, Point origin, double side, int n) {
  if (n < 2) throw ValidationError("weight grid needs n >= 2");
  WeightFields out;
  out.phi = GridField::planar(n, origin, side);
  out.abs_P = GridField::planar(n, origin, side);
  const double h = out.phi.spacing();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const Point z = out.phi.node(ix, iy);
      if (near_center(w, z, 2 * h) || !w.defined(z)) {
        out.phi.at(ix, iy) = nan;
        out.abs_P.at(ix, iy) = nan;
        continue;
      }
      out.phi.at(ix, iy) = w.phi(z);
      out.abs_P.at(ix, iy) = std::exp(0.5 * w.log_abs_P2(z));
    }
  return out;
}

// ---------------------------------------------------------------------------

ComplexField dx(const ComplexField& u) { return first_derivative(u, 0); }
ComplexField dy(const ComplexField& u) { return first_derivative(u, 1); }

ComplexField dbar(const ComplexField& u) {
  auto out = dx(u);
  out.values() = 0.5 * (out.values() + Complex(0.0, 1.0) * dy(u).values());
  return out;
}

ComplexField del(const ComplexField& u) {
  auto out = dx(u);
  out.values() = 0.5 * (out.values() - Complex(0.0, 1.0) * dy(u).values());
  return out;
}

ComplexField dbar_adjoint(const ComplexField& v, const GridField& phi) {
  auto w = v;
  w.values() = v.values() * (-phi.values()).exp().cast<Complex>();
  auto out = del(w);
  out.values() = -out.values() * phi.values().exp().cast<Complex>();
  return out;
}

GridField laplacian(const GridField& f) {
  auto out = GridField::planar(f.n(), f.origin(), f.side());
  const int n = f.n();
  const double c = 1.0 / (12.0 * f.spacing() * f.spacing());
  for (int iy = 2; iy < n - 2; ++iy)
    for (int ix = 2; ix < n - 2; ++ix)
      out.at(ix, iy) = c * (-f.at(ix + 2, iy) + 16 * f.at(ix + 1, iy) - 60 * f.at(ix, iy) + 16 * f.at(ix - 1, iy) -
                            f.at(ix - 2, iy) - f.at(ix, iy + 2) + 16 * f.at(ix, iy + 1) + 16 * f.at(ix, iy - 1) -
                            f.at(ix, iy - 2));
  return out;
}

ComplexField to_complex(const GridField& f) {
  auto out = ComplexField::planar(f.n(), f.origin(), f.side());
  out.values() = f.values().cast<Complex>();
  return out;
}

// ---------------------------------------------------------------------------

Complex TestFunction::operator()(Point z) const {
  Complex v = 0.0;
  for (const Bump& b : bumps) {
    const double s = dot(z - b.center, z - b.center) / (b.radius * b.radius);
    if (s < 1.0) v += b.amp * std::exp(1.0 - 1.0 / (1.0 - s));
  }
  return v;
}

Box TestFunction::support() const {
  if (bumps.empty()) throw ValidationError("test function has no bumps");
  Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Bump& u : bumps) {
    b.xmin = std::min(b.xmin, u.center.x - u.radius);
    b.ymin = std::min(b.ymin, u.center.y - u.radius);
    b.xmax = std::max(b.xmax, u.center.x + u.radius);
    b.ymax = std::max(b.ymax, u.center.y + u.radius);
  }
  return b;
}

double TestFunction::min_radius() const {
  double r = std::numeric_limits<double>::infinity();
  for (const Bump& b : bumps) r = std::min(r, b.radius);
  return r;
}

TestFunction random_test_function(const Weight& w, std::uint64_t seed, bool complex_amp) {
  RngStream rng(seed, 0x6361726c);
  TestFunction f;
  const int count = rng.integer(1, 5);
  const double inner = (1.0 - 2 * w.a) * w.delta;
  for (int k = 0; k < count; ++k) {
    Bump b;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw NumericalError("could not place a test bump outside the inner disks");
      if (w.centers.empty()) {
        const double r = 0.5 * std::sqrt(rng.uniform()), th = two_pi * rng.uniform();
        b.center = {r * std::cos(th), r * std::sin(th)};
        b.radius = rng.uniform(0.1, 0.4);
      } else {
        const Point c = w.centers[rng.integer(0, static_cast<int>(w.centers.size()) - 1)];
        const double th = two_pi * rng.uniform();
        b.radius = rng.uniform(0.3, 1.2) * w.delta;
        // Squared draw biases the gap towards 0 so a fair share of bumps reach the annulus.
        const double g = rng.uniform(0.0, 1.2);
        const double d = inner + b.radius + g * g * w.delta;
        b.center = {c.x + d * std::cos(th), c.y + d * std::sin(th)};
      }
      bool clear = true;
      for (const Point& c : w.centers)
        if (distance(b.center, c) < inner + b.radius) clear = false;
      if (clear) break;
    }
    b.amp = {rng.uniform(-1.0, 1.0), complex_amp ? rng.uniform(-1.0, 1.0) : 0.0};
    f.bumps.push_back(b);
  }
  return f;
}

// ---------------------------------------------------------------------------

SubharmonicCheck check_subharmonic_inequality(const TestFunction& u, const Weight& w, double spacing) {
  const auto grid = support_grid(u, spacing);
  auto g = ComplexField::planar(grid.n(), grid.origin(), grid.side());
  add_bumps(g, u, false);
  const auto du = dbar(g);
  const double h = g.spacing();
  const double scale = g.max_abs();
  SubharmonicCheck out;
  for (int iy = 2; iy < g.n() - 2; ++iy)
    for (int ix = 2; ix < g.n() - 2; ++ix) {
      const Complex v = g.at(ix, iy), d = du.at(ix, iy);
      if (v == 0.0 && d == 0.0) continue;
      const Point z = g.node(ix, iy);
      if (!w.defined(z) || near_center(w, z, 2 * h)) {
        if (std::abs(v) > 1e-12 * scale) throw ValidationError("test function must vanish where the weight is undefined");
        continue;
      }
      const double phi = w.phi(z);
      out.lhs += std::norm(d) * phi;
      out.rhs += 0.25 * w.lap_log_phi(z) * std::norm(v) * phi;
      out.norm2 += std::norm(v) * phi;
    }
  out.lhs *= h * h;
  out.rhs *= h * h;
  out.norm2 *= h * h;
  out.margin = out.lhs - out.rhs;
  out.holds = out.margin >= -1e-6 * (out.lhs + std::abs(out.rhs));
  return out;
}

C1Check carleman_c1_check(const TestFunction& f, const Weight& w, double spacing) {
  auto g = support_grid(f, spacing);
  add_bumps(g, f, true);
  const double h = g.spacing();
  const double inner = (1.0 - 2 * w.a) * w.delta;
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix)
      if (g.at(ix, iy) != 0.0) {
        const Point z = g.node(ix, iy);
        for (const Point& c : w.centers)
          if (distance(z, c) <= inner && std::abs(g.at(ix, iy)) > 1e-10)
            throw ValidationError("test function must vanish on the inner disks");
      }
  const auto lap = laplacian(g);
  const auto cg = to_complex(g);
  const auto gx = dx(cg), gy = dy(cg);
  C1Check out;
  for (int iy = 2; iy < g.n() - 2; ++iy)
    for (int ix = 2; ix < g.n() - 2; ++ix) {
      const double v = g.at(ix, iy), l = lap.at(ix, iy);
      if (v == 0.0 && l == 0.0) continue;
      const Point z = g.node(ix, iy);
      if (near_center(w, z, 2 * h)) continue;
      double log_weight = w.t * dot(z, z);
      for (const Point& c : w.centers) log_weight -= std::log(dot(z - c, z - c));
      const double wt = std::exp(log_weight);
      out.lhs += l * l * wt;
      out.t2_term += v * v * wt;
      if (w.in_annuli(z)) out.grad_term += (std::norm(gx.at(ix, iy)) + std::norm(gy.at(ix, iy))) * wt;
    }
  out.lhs *= h * h;
  out.t2_term *= w.t * w.t * h * h;
  out.grad_term *= h * h / (w.delta * w.delta);
  const double den = out.t2_term + out.grad_term;
  out.degenerate = !(den > 0.0);
  out.constant = out.degenerate ? 0.0 : out.lhs / den;
  return out;
}

}  // namespace ngl::carleman
