#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ngl/eigen.hpp"
#include "ngl/regions.hpp"
#include "ngl/surface.hpp"

namespace ngl::schrodinger {

using Sampler = std::function<double(double, double)>;

// A solution of Delta F + q F = 0 on the disk 3D: sampled on a planar grid
// over [-3, 3]^2 masked to |z| <= 3, plus a continuous evaluator for work at
// scales below the grid (rapid disks live far inside one planar cell).
struct PlanarField {
  GridField F;          // sup-normalized on the mask
  GridField potential;  // q on the same grid
  Sampler exact;        // continuous F with the same normalization
  double eps0 = 0.1;
  double residual = 0.0;  // max |Delta_h F + q F| over nodes with |z| <= 2.9

  double operator()(double x, double y) const { return exact(x, y); }
};

struct LocalizeOptions {
  double eps0 = 0.1;
  int planar_n = 1024;
  // Fourier coefficients below this fraction of the largest are dropped from
  // the interpolant of the eigenfunction (solver noise lives there).
  double mode_cutoff = 1e-6;
};

/// Planar field from closed forms (test fields and synthetic examples).
/// `potential` may be empty for q == 0.
PlanarField make_planar(const Sampler& f, const Sampler& potential, const LocalizeOptions& opts = {});

/// Scale s = tau k0 lambda^{-1/2} with tau = 2 q+ alpha0.
double localization_scale(const surface::ConformalMetric& metric, double lambda, double k0);

/// F(z) = phi(p + s z) sup-normalized on 3D, potential (k0 tau)^2 q(p + s z).
/// phi is evaluated through its trigonometric interpolant.
/// Throws ValidationError when sup |potential| >= eps0 (use a smaller k0),
/// when the radius-3 disk spans fewer than 10 torus cells, or when F == 0.
PlanarField localize(const eigen::EigenPair& pair, const surface::ConformalMetric& metric, Point p, double k0,
                     const LocalizeOptions& opts = {});

/// A nodal point of the field near `target` (closest segment point), used as
/// the deterministic localization centre for a family.
Point nodal_point_near(const GridField& torus_field, Point target);

struct BetaStar {
  double beta = 0.0;       // log(sup_{5/2 D} |F| / sup_{1/4 D} |F|)
  double beta_star = 1.0;  // max(beta, 1)
};

BetaStar beta_star(const PlanarField& f);

// Disk D(z, delta) with its three annuli (radius intervals):
//   A   = ((1 - 2a) delta, (1 - a) delta)
//   A'' = ((1 - 3a/2) delta, (1 - a) delta)
//   A'  = ((1 - 3a) delta, (1 - 4a/3) delta)
struct DiskAnnuli {
  Point center;
  double delta = 0.0;
  double a = 0.1;

  Annulus A() const { return {center, (1 - 2 * a) * delta, (1 - a) * delta}; }
  Annulus A_doubleprime() const { return {center, (1 - 1.5 * a) * delta, (1 - a) * delta}; }
  Annulus A_prime() const { return {center, (1 - 3 * a) * delta, (1 - 4 * a / 3) * delta}; }
};

struct RapidResult {
  bool is_rapid = false;
  double int_Aprime = 0.0;
  double int_Adoubleprime = 0.0;
};

/// M * int_{A'} F^2 <= int_{A''} F^2. Quadrature on a lattice centred at the
/// disk centre with spacing quad_h (default a delta / 8); the annulus must be
/// resolvable, a delta >= 4 quad_h, and the disk must lie inside 3D.
RapidResult classify_rapid(const PlanarField& f, const DiskAnnuli& disk, double M, double quad_h = 0.0);

struct RapidCount {
  std::vector<Point> probes;
  std::vector<RapidResult> results;
  int n_rapid = 0;
  double beta_star = 1.0;
  double ratio = 0.0;  // n_rapid / beta_star
};

/// Probe centres on a hexagonal lattice of pitch 2 gamma delta = 2 sqrt(delta)
/// with |z| + delta <= 1/60 (a maximal gamma-separated family there).
std::vector<Point> separated_probes(double delta);

/// Throws ValidationError unless delta < 1/60 and delta beta* < 1/2.
void check_disk_constraints(double delta, double beta_star);

RapidCount count_rapid_disks(const PlanarField& f, double delta, double M, double a = 0.1);

struct PoincareResult {
  double grad_energy = 0.0;  // int_A |grad f|^2
  double l2_mass = 0.0;      // int_A f^2
  double ratio = 0.0;        // delta^2 grad / mass
  bool degenerate = false;   // f == 0 on A
};

/// Annulus Poincare ratio on A for a test function vanishing on the inner
/// boundary |z - z_nu| = (1 - 2a) delta (checked to 1e-8). The gradient uses
/// centred differences of the sampler.
PoincareResult annulus_poincare_check(const Sampler& f, const DiskAnnuli& disk, double quad_h = 0.0);

// Growth of F over the disks 5/2 D and 1/4 D, the same quantity measured
// directly on the torus over their images, and the metric growth exponent
// beta_p(lambda) that should dominate it.
struct ChainCheck {
  double beta_F = 0.0;            // from the localized field
  double beta_direct = 0.0;  // torus disks of radii (5/2) s and s / 4 around p
  double beta_sqrt = 0.0;    // disks D(r / sqrt(q+)) and D(alpha0 r / sqrt(q-))
  double beta_p = 0.0;       // metric disks of radii r = k0 lambda^{-1/2} and alpha0 r
  bool correspondence_holds = false;  // beta_F <= beta_p + 1e-2
  bool sqrt_holds = false;            // beta_sqrt <= beta_p + 1e-2
};

ChainCheck chain_check(const eigen::EigenPair& pair, const surface::ConformalMetric& metric, Point p, double k0,
                       const LocalizeOptions& opts = {});

}  // namespace ngl::schrodinger
