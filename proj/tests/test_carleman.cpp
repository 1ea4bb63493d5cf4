#include <doctest.h>

#include "ngl/carleman.hpp"

using namespace ngl;
using namespace ngl::carleman;

namespace {

std::vector<Point> triangle(double circumradius) {
  std::vector<Point> c;
  for (int k = 0; k < 3; ++k) c.push_back({circumradius * std::cos(two_pi * k / 3), circumradius * std::sin(two_pi * k / 3)});
  return c;
}

ComplexField sample_complex(int n, double side, const std::function<Complex(double, double)>& fn) {
  return ComplexField::sample_planar(n, {-side / 2, -side / 2}, side, fn);
}

// Weighted pairing sum a conj(b) e^{-phi} h^2 over nodes at least 4 cells
// from the edge.
Complex pairing(const ComplexField& a, const ComplexField& b, const GridField& phi) {
  Complex s = 0.0;
  for (int iy = 4; iy < a.n() - 4; ++iy)
    for (int ix = 4; ix < a.n() - 4; ++ix) s += a.at(ix, iy) * std::conj(b.at(ix, iy)) * std::exp(-phi.at(ix, iy));
  return s * a.spacing() * a.spacing();
}

Complex bump(double x, double y, double cx, double cy, double r) {
  const double s = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r * r);
  return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
}

}  // namespace

TEST_CASE("radial solver matches the constant-h closed form") {
  for (double c : {1.0, 0.7, 3.0}) {
    const auto p = solve_radial(constant_h(c), 0.5, 2.0);
    for (double r : {0.5, 0.61, 0.8, 0.95, 1.0, 1.3, 2.0}) {
      CHECK(std::abs(p.log_psi(r) - (c * r * r / 4 - c / 2 * std::log(r) - c / 4)) < 1e-8);
      CHECK(std::abs(p.dlog_psi(r) - (c * r / 2 - c / (2 * r))) < 1e-8);
    }
  }
  CHECK(std::isnan(solve_radial(constant_h(1), 0.5, 2.0).log_psi(0.4)));
}

TEST_CASE("psi0 built from the smoothstep profile") {
  for (double a : {0.05, 0.1, 0.2}) {
    const auto p = build_psi0(a, default_h(a));
    const auto rep = check_psi0(p, a);
    CHECK(rep.value_at_1 == 0.0);
    CHECK(rep.slope_at_1 == 0.0);
    CHECK(rep.max_outside == 0.0);
    CHECK(rep.a1 >= 1.0 - 1e-12);
    CHECK(rep.a2 < 1.1);
    CHECK(rep.max_residual < 1e-4);
    CHECK(rep.min_laplacian_annulus > 0.999);
  }
  CHECK_THROWS_AS(build_psi0(0.1, constant_h(1.0)), ValidationError);
  CHECK_THROWS_AS(build_psi0(0.1, constant_h(-1.0)), ValidationError);
  CHECK_THROWS_AS(build_psi0(0.1, default_h(0.1, 0.5), 1.0), ValidationError);
  CHECK_THROWS_AS(build_psi0(0.3, default_h(0.3)), ValidationError);
}

TEST_CASE("log Phi0 has Laplacian at least a3 / delta^2 on the annuli") {
  const double delta = 1e-3, a = 0.1;
  const auto w = build_weight(triangle(3 * delta), delta, a, 1.0);
  const Point c = w.centers[0];
  const int n = 801;
  const double side = 2.4 * delta;
  auto g = GridField::sample_planar(n, {c.x - side / 2, c.y - side / 2}, side,
                                    [&](double x, double y) { return w.log_phi0({x, y}); });
  const double h = g.spacing();
  int probed = 0;
  double worst = 0.0;
  for (int iy = 1; iy < n - 1; ++iy)
    for (int ix = 1; ix < n - 1; ++ix) {
      const Point z = g.node(ix, iy);
      const double r = distance(z, c) / delta;
      // Keep the 5-point stencil inside the annulus.
      if (r < 1 - 2 * a + 2 * h / delta || r > 1 - a - 2 * h / delta) continue;
      const double lap = (g.at(ix + 1, iy) + g.at(ix - 1, iy) + g.at(ix, iy + 1) + g.at(ix, iy - 1) - 4 * g.at(ix, iy)) / (h * h);
      worst = std::max(worst, std::abs(lap * delta * delta - 1.0));
      ++probed;
    }
  CHECK(probed > 1000);
  CHECK(worst < 0.05);
  CHECK(w.lap_log_phi0({c.x + 0.85 * delta, c.y}) == doctest::Approx(1.0 / (delta * delta)));
  CHECK(w.log_phi0({1.0, 1.0}) == 0.0);
  CHECK_FALSE(w.defined(c));
  CHECK(w.in_annuli({c.x + 0.85 * delta, c.y}));
  CHECK_FALSE(w.in_annuli({c.x + 0.95 * delta, c.y}));
}

TEST_CASE("weight construction and sampling") {
  CHECK_THROWS_AS(build_weight({{0, 0}, {1.5e-3, 0}}, 1e-3, 0.1, 1.0), ValidationError);
  CHECK_THROWS_AS(build_weight({}, 1e-3, 0.1, 0.0), ValidationError);
  CHECK_THROWS_AS(build_weight({}, 1e-3, 0.3, 1.0), ValidationError);
  const auto w = build_weight({{0, 0}}, 0.1, 0.1, 2.0, true, true);
  const auto f = sample_weight(w, {-0.5, -0.5}, 1.0, 101);
  CHECK(std::isnan(f.phi(0.0, 0.0)));
  CHECK(std::isnan(f.phi.at(51, 50)));
  CHECK(f.abs_P.at(100, 50) == doctest::Approx(0.5));
  CHECK(f.phi.at(100, 50) == doctest::Approx(std::exp(2.0 * 0.25) / 0.25));
}

TEST_CASE("discrete complex derivatives") {
  const int n = 201;
  const double side = 2.0;
  // dbar kills holomorphic polynomials; del of z^3 is 3 z^2.
  const auto p = sample_complex(n, side, [](double x, double y) {
    const Complex z(x, y);
    return z * z * z - 2.0 * z + 1.0;
  });
  const auto dp = dbar(p);
  const auto dz = del(p);
  double dmax = 0.0, zerr = 0.0;
  for (int iy = 2; iy < n - 2; ++iy)
    for (int ix = 2; ix < n - 2; ++ix) {
      const Point q = p.node(ix, iy);
      const Complex z(q.x, q.y);
      dmax = std::max(dmax, std::abs(dp.at(ix, iy)));
      zerr = std::max(zerr, std::abs(dz.at(ix, iy) - (3.0 * z * z - 2.0)));
    }
  CHECK(dmax < 1e-10);
  CHECK(zerr < 1e-10);

  // dbar del psi = Delta psi / 4 on a smooth real function.
  auto psi = [](double x, double y) { return std::exp(-(x * x + y * y)) * std::cos(2 * x + y); };
  const auto ps = sample_complex(n, side, [&](double x, double y) { return Complex(psi(x, y), 0.0); });
  const auto dd = dbar(del(ps));
  GridField real = GridField::planar(n, ps.origin(), side);
  real.fill(psi);
  const auto lap = laplacian(real);
  double err = 0.0, top = 0.0;
  for (int iy = 4; iy < n - 4; ++iy)
    for (int ix = 4; ix < n - 4; ++ix) {
      err = std::max(err, std::abs(dd.at(ix, iy) - 0.25 * lap.at(ix, iy)));
      top = std::max(top, std::abs(lap.at(ix, iy)));
    }
  CHECK(err < 1e-5 * top);
}

TEST_CASE("weighted adjoint and commutator") {
  const int n = 321;
  const double side = 2.0;
  auto phi_fn = [](double x, double y) { return 1.5 * (x * x + y * y) + 0.3 * std::sin(2 * x) * y; };
  // Delta phi = 6 - 1.2 sin(2x) y.
  auto lap_phi = [](double x, double y) { return 6.0 - 1.2 * std::sin(2 * x) * y; };
  GridField phi = GridField::planar(n, {-1, -1}, side);
  phi.fill(phi_fn);
  const auto u = sample_complex(n, side, [](double x, double y) {
    return Complex(1.0, 0.5) * bump(x, y, 0.1, -0.2, 0.6) + Complex(0.0, -0.7) * bump(x, y, -0.3, 0.25, 0.4);
  });
  const auto v = sample_complex(n, side, [](double x, double y) {
    return Complex(0.4, -1.0) * bump(x, y, -0.1, 0.1, 0.7) + 0.8 * bump(x, y, 0.35, 0.3, 0.35);
  });
  const Complex left = pairing(dbar(u), v, phi);
  const Complex right = pairing(u, dbar_adjoint(v, phi), phi);
  CHECK(std::abs(left - right) < 1e-6 * std::abs(left));

  // [dbar, dbar*] u = (Delta phi / 4) u.
  const auto comm_a = dbar(dbar_adjoint(u, phi));
  const auto comm_b = dbar_adjoint(dbar(u), phi);
  double err = 0.0, top = 0.0;
  for (int iy = 6; iy < n - 6; ++iy)
    for (int ix = 6; ix < n - 6; ++ix) {
      const Point z = u.node(ix, iy);
      const Complex expect = 0.25 * lap_phi(z.x, z.y) * u.at(ix, iy);
      err = std::max(err, std::abs(comm_a.at(ix, iy) - comm_b.at(ix, iy) - expect));
      top = std::max(top, std::abs(expect));
    }
  CHECK(err < 1e-3 * top);
}

TEST_CASE("test functions vanish outside their support") {
  const double delta = 1e-3;
  const auto w = build_weight(triangle(3 * delta), delta, 0.1, 1.0);
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto f = random_test_function(w, s, true);
    CHECK(f.bumps.size() >= 1);
    CHECK(f.bumps.size() <= 5);
    for (const Bump& b : f.bumps) {
      const TestFunction single{{b}};
      CHECK(single(b.center + Point{b.radius, 0.0}) == Complex(0.0));
      CHECK(single(b.center + Point{0.0, -1.01 * b.radius}) == Complex(0.0));
      for (const Point& c : w.centers) CHECK(distance(b.center, c) >= 0.8 * delta + b.radius);
    }
    for (const Point& c : w.centers) CHECK(f(c) == Complex(0.0));
  }
  // Same seed, same function.
  CHECK(random_test_function(w, 7, true).bumps[0].center == random_test_function(w, 7, true).bumps[0].center);
}

TEST_CASE("subharmonic weight inequality on 60 random pairs") {
  int checked = 0;
  for (double t : {1.0, 5.0, 20.0}) {
    const auto w = build_weight({}, 1.0, 0.1, t, false, false);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto r = check_subharmonic_inequality(random_test_function(w, s, true), w);
      CHECK(r.holds);
      // With no centres the right side is t int |u|^2 Phi.
      CHECK(r.rhs == doctest::Approx(t * r.norm2).epsilon(1e-12));
      ++checked;
    }
  }
  const double delta = 1e-3;
  for (bool with_p : {false, true}) {
    const auto w = build_weight(triangle(3 * delta), delta, 0.1, 10.0, true, with_p);
    for (std::uint64_t s = 0; s < 15; ++s) {
      const auto r = check_subharmonic_inequality(random_test_function(w, 100 + s, true), w);
      CHECK(r.holds);
      ++checked;
    }
  }
  CHECK(checked == 60);
}

TEST_CASE("holomorphic times a wide bump") {
  // u = p(z / R) b(z) with b of radius R = 200: dbar u = p dbar b is small
  // next to u, and t << 1 / R^2 keeps the right side small too.
  const double R = 200.0;
  const auto w = build_weight({}, 1.0, 0.1, 1e-6, false, false);
  TestFunction f;
  f.bumps.push_back({{0.0, 0.0}, R, 1.0});
  auto g = ComplexField::sample_planar(401, {-1.02 * R, -1.02 * R}, 2.04 * R, [&](double x, double y) {
    const Complex z = Complex(x, y) / R;
    return (1.0 + 0.5 * z + 0.25 * z * z) * f({x, y});
  });
  const auto d = dbar(g);
  double lhs = 0.0, rhs = 0.0, norm2 = 0.0;
  for (int iy = 2; iy < g.n() - 2; ++iy)
    for (int ix = 2; ix < g.n() - 2; ++ix) {
      const Point z = g.node(ix, iy);
      const double phi = w.phi(z);
      lhs += std::norm(d.at(ix, iy)) * phi;
      rhs += 0.25 * w.lap_log_phi(z) * std::norm(g.at(ix, iy)) * phi;
      norm2 += std::norm(g.at(ix, iy)) * phi;
    }
  CHECK(lhs < 1e-3 * norm2);
  CHECK(rhs < 1e-3 * norm2);
  CHECK(lhs >= rhs);
}

TEST_CASE("Carleman estimate near three small disks") {
  const double delta = 1e-3;
  const auto w = build_weight(triangle(3 * delta), delta, 0.1, 10.0, false, true);
  double min30 = std::numeric_limits<double>::infinity(), min60 = min30;
  int reached = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto r = carleman_c1_check(random_test_function(w, s, false), w);
    REQUIRE_FALSE(r.degenerate);
    CHECK(r.constant > 0.0);
    if (r.grad_term > 0.0) ++reached;
    if (s < 30) min30 = std::min(min30, r.constant);
    min60 = std::min(min60, r.constant);
  }
  CHECK(reached >= 10);
  CHECK(min60 > 0.0);
  CHECK((min30 - min60) / min30 < 0.2);

  TestFunction bad;
  bad.bumps.push_back({w.centers[0], 0.5 * delta, 1.0});
  CHECK_THROWS_AS(carleman_c1_check(bad, w), ValidationError);
  TestFunction zero;
  zero.bumps.push_back({{0.1, 0.1}, delta, 0.0});
  CHECK(carleman_c1_check(zero, w).degenerate);
}
