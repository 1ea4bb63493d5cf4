#include "ngl/schrodinger.hpp"

#include <limits>

#include "ngl/fourier.hpp"
#include "ngl/growth.hpp"
#include "ngl/nodal.hpp"
#include "ngl/parallel.hpp"

namespace ngl::schrodinger {

namespace {

constexpr double planar_radius = 3.0;
constexpr double residual_radius = 2.9;

double max_residual(const GridField& F, const GridField& V) {
  const int n = F.n();
  const double inv_h2 = 1.0 / (F.spacing() * F.spacing());
  std::vector<double> rows(n, 0.0);
  parallel_for(static_cast<std::size_t>(n - 2), [&](std::size_t r) {
    const int j = static_cast<int>(r) + 1;
    double worst = 0.0;
    for (int i = 1; i < n - 1; ++i) {
      if (norm(F.node(i, j)) > residual_radius) continue;
      const double lap =
          (F.at(i + 1, j) + F.at(i - 1, j) + F.at(i, j + 1) + F.at(i, j - 1) - 4.0 * F.at(i, j)) * inv_h2;
      worst = std::max(worst, std::abs(lap + V.at(i, j) * F.at(i, j)));
    }
    rows[j] = worst;
  });
  return *std::max_element(rows.begin(), rows.end());
}

// Masks, normalizes and finishes a field whose raw samples are already in F.
PlanarField finish(GridField F, GridField V, Sampler raw, const LocalizeOptions& opts) {
  F.set_disk_mask({0.0, 0.0}, planar_radius);
  const double sup = F.max_abs();
  if (!(sup > 0.0) || !std::isfinite(sup)) throw ValidationError("zero field cannot be sup-normalized on 3D");
  F.values() /= sup;
  V.set_disk_mask({0.0, 0.0}, planar_radius);
  const double vmax = V.max_abs();
  if (!(vmax < opts.eps0))
    throw ValidationError("potential sup " + std::to_string(vmax) + " >= eps0 " + std::to_string(opts.eps0) +
                          ": use a smaller k0");
  PlanarField out;
  out.residual = max_residual(F, V);
  out.F = std::move(F);
  out.potential = std::move(V);
  out.eps0 = opts.eps0;
  const double inv = 1.0 / sup;
  out.exact = [raw = std::move(raw), inv](double x, double y) { return inv * raw(x, y); };
  return out;
}

Lattice local_lattice(Point center, double h) { return {center, h}; }

}  // namespace

PlanarField make_planar(const Sampler& f, const Sampler& potential, const LocalizeOptions& opts) {
  if (opts.planar_n < 16) throw ValidationError("planar grid needs at least 16 points per side");
  const Point origin{-planar_radius, -planar_radius};
  const double side = 2 * planar_radius;
  auto F = GridField::sample_planar(opts.planar_n, origin, side, f);
  auto V = potential ? GridField::sample_planar(opts.planar_n, origin, side, potential)
                     : GridField::planar(opts.planar_n, origin, side);
  return finish(std::move(F), std::move(V), f, opts);
}

double localization_scale(const surface::ConformalMetric& metric, double lambda, double k0) {
  if (!(lambda > 0.0)) throw ValidationError("localization needs lambda > 0");
  if (!(k0 > 0.0)) throw ValidationError("k0 must be positive");
  const double tau = 2.0 * metric.q_plus() * metric.alpha0();
  return tau * k0 / std::sqrt(lambda);
}

PlanarField localize(const eigen::EigenPair& pair, const surface::ConformalMetric& metric, Point p, double k0,
                     const LocalizeOptions& opts) {
  if (pair.field.n() != metric.grid_n()) throw ValidationError("eigenfunction and metric grids differ");
  if (opts.planar_n < 16) throw ValidationError("planar grid needs at least 16 points per side");
  const double s = localization_scale(metric, pair.lambda, k0);
  const double h = metric.spacing();
  if (2 * planar_radius * s < 10.0 * h)
    throw ValidationError("localization disk spans fewer than 10 grid cells: raise grid_n to at least " +
                          std::to_string(static_cast<int>(std::ceil(10.0 / (2 * planar_radius * s)))));
  const double tau = 2.0 * metric.q_plus() * metric.alpha0();
  const double kt2 = (k0 * tau) * (k0 * tau);

  auto interp = std::make_shared<const TrigInterpolant>(pair.field, opts.mode_cutoff);
  const int n = opts.planar_n;
  const Point origin{-planar_radius, -planar_radius};
  const double side = 2 * planar_radius;
  auto F = GridField::planar(n, origin, side);
  F.values() = interp->sample_lattice(p + s * origin, s * F.spacing(), n, n);
  auto V = GridField::sample_planar(n, origin, side, [&](double x, double y) {
    return kt2 * metric.q_at({p.x + s * x, p.y + s * y});
  });
  Sampler raw = [interp, p, s](double x, double y) { return (*interp)(p.x + s * x, p.y + s * y); };
  return finish(std::move(F), std::move(V), std::move(raw), opts);
}

Point nodal_point_near(const GridField& torus_field, Point target) {
  const nodal::NodalSet set = nodal::extract_nodal_set(torus_field);
  if (set.segments.empty()) throw ValidationError("field has no nodal set");
  double best = std::numeric_limits<double>::infinity();
  Point found = target;
  for (const nodal::Segment& seg : set.segments) {
    // Closest point of the segment to the nearest periodic image of target.
    const Point mid = 0.5 * (seg.a + seg.b);
    const Point shift{std::round(target.x - mid.x), std::round(target.y - mid.y)};
    const Point t = target - shift;
    const Point d = seg.b - seg.a;
    const double len2 = dot(d, d);
    const double u = len2 > 0 ? std::clamp(dot(t - seg.a, d) / len2, 0.0, 1.0) : 0.0;
    const Point c = seg.a + u * d;
    const double dist = distance(c, t);
    if (dist < best) {
      best = dist;
      found = c;
    }
  }
  return {wrap_unit(found.x), wrap_unit(found.y)};
}

BetaStar beta_star(const PlanarField& f) {
  BetaStar out;
  // Continuous field on the planar lattice, so rim samples are exact.
  const Lattice lat = Lattice::of(f.F);
  out.beta = growth::log_ratio(sup_on_region(f, EuclideanDisk{{0, 0}, 2.5}, lat),
                               sup_on_region(f, EuclideanDisk{{0, 0}, 0.25}, lat));
  out.beta_star = std::max(out.beta, 1.0);
  return out;
}

RapidResult classify_rapid(const PlanarField& f, const DiskAnnuli& disk, double M, double quad_h) {
  if (!(disk.a > 0.0 && disk.a < 0.25)) throw ValidationError("annulus thickness a must lie in (0, 1/4)");
  if (!(disk.delta > 0.0)) throw ValidationError("disk radius must be positive");
  if (!(M >= 0.0)) throw ValidationError("rapid threshold M must be >= 0");
  if (norm(disk.center) + disk.delta > planar_radius) throw ValidationError("disk leaves the field domain 3D");
  const double h = quad_h > 0.0 ? quad_h : disk.a * disk.delta / 8.0;
  if (disk.a * disk.delta < 4.0 * h)
    throw ValidationError("annulus not resolvable: a delta must be at least 4 quadrature steps");
  const Lattice lat = local_lattice(disk.center, h);
  auto sq = [&](double x, double y) {
    const double v = f(x, y);
    return v * v;
  };
  RapidResult r;
  r.int_Aprime = integrate_on_region(sq, disk.A_prime(), lat);
  r.int_Adoubleprime = integrate_on_region(sq, disk.A_doubleprime(), lat);
  r.is_rapid = M * r.int_Aprime <= r.int_Adoubleprime;
  return r;
}

std::vector<Point> separated_probes(double delta) {
  const double limit = 1.0 / 60.0 - delta;
  const double pitch = 2.0 * std::sqrt(delta);
  std::vector<Point> out;
  if (limit < 0) return out;
  const int rows = static_cast<int>(std::floor(limit / (pitch * std::sqrt(3.0) / 2)));
  const int cols = static_cast<int>(std::floor(limit / pitch)) + 1;
  for (int j = -rows; j <= rows; ++j) {
    const double y = j * pitch * std::sqrt(3.0) / 2;
    const double x0 = (j & 1) ? 0.5 * pitch : 0.0;
    for (int i = -cols; i <= cols; ++i) {
      const Point z{x0 + i * pitch, y};
      if (norm(z) <= limit) out.push_back(z);
    }
  }
  return out;
}

void check_disk_constraints(double delta, double beta_star) {
  if (!(delta > 0.0 && delta < 1.0 / 60.0)) throw ValidationError("disk radius delta must lie in (0, 1/60)");
  if (!(delta * beta_star < 0.5))
    throw ValidationError("delta * beta* = " + std::to_string(delta * beta_star) + " must be < 1/2");
}

RapidCount count_rapid_disks(const PlanarField& f, double delta, double M, double a) {
  RapidCount out;
  out.beta_star = beta_star(f).beta_star;
  check_disk_constraints(delta, out.beta_star);
  out.probes = separated_probes(delta);
  out.results.resize(out.probes.size());
  parallel_for(out.probes.size(),
               [&](std::size_t i) { out.results[i] = classify_rapid(f, {out.probes[i], delta, a}, M); });
  for (const auto& r : out.results) out.n_rapid += r.is_rapid ? 1 : 0;
  out.ratio = out.n_rapid / out.beta_star;
  return out;
}

PoincareResult annulus_poincare_check(const Sampler& f, const DiskAnnuli& disk, double quad_h) {
  if (!(disk.a > 0.0 && disk.a < 0.5 && disk.delta > 0.0)) throw ValidationError("bad annulus parameters");
  const double r0 = (1 - 2 * disk.a) * disk.delta;
  for (int k = 0; k < 64; ++k) {
    const double t = two_pi * k / 64;
    const double v = f(disk.center.x + r0 * std::cos(t), disk.center.y + r0 * std::sin(t));
    if (std::abs(v) > 1e-8) throw ValidationError("test function must vanish on the inner boundary of A");
  }
  const double h = quad_h > 0.0 ? quad_h : disk.a * disk.delta / 16.0;
  const double e = h * 1e-2;
  const Lattice lat = local_lattice(disk.center, h);
  auto grad2 = [&](double x, double y) {
    const double gx = (f(x + e, y) - f(x - e, y)) / (2 * e);
    const double gy = (f(x, y + e) - f(x, y - e)) / (2 * e);
    return gx * gx + gy * gy;
  };
  auto sq = [&](double x, double y) {
    const double v = f(x, y);
    return v * v;
  };
  PoincareResult out;
  out.grad_energy = integrate_on_region(grad2, disk.A(), lat);
  out.l2_mass = integrate_on_region(sq, disk.A(), lat);
  if (out.l2_mass <= 0.0) {
    out.degenerate = true;
    return out;
  }
  out.ratio = disk.delta * disk.delta * out.grad_energy / out.l2_mass;
  return out;
}

ChainCheck chain_check(const eigen::EigenPair& pair, const surface::ConformalMetric& metric, Point p, double k0,
                       const LocalizeOptions& opts) {
  ChainCheck out;
  const PlanarField F = localize(pair, metric, p, k0, opts);
  out.beta_F = beta_star(F).beta;

  const double s = localization_scale(metric, pair.lambda, k0);
  const double r = growth::wavelength_radius(pair.lambda, k0, metric.spacing());
  const Lattice lat = Lattice::of(pair.field);
  auto cubic = [&](double x, double y) { return pair.field.cubic(x, y); };
  out.beta_direct = growth::log_ratio(sup_on_region(cubic, EuclideanDisk{p, 2.5 * s}, lat),
                                      sup_on_region(cubic, EuclideanDisk{p, 0.25 * s}, lat));
  out.beta_sqrt =
      growth::log_ratio(sup_on_region(cubic, EuclideanDisk{p, r / std::sqrt(metric.q_plus())}, lat),
                        sup_on_region(cubic, EuclideanDisk{p, metric.alpha0() * r / std::sqrt(metric.q_minus())}, lat));
  out.beta_p = growth::growth_exponent(pair.field, p, r, metric.alpha0(), metric);
  out.correspondence_holds = out.beta_F <= out.beta_p + 1e-2;
  out.sqrt_holds = out.beta_sqrt <= out.beta_p + 1e-2;
  return out;
}

}  // namespace ngl::schrodinger
