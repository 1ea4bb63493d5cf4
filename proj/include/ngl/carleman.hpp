#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "ngl/grid_field.hpp"

namespace ngl::carleman {

using Complex = std::complex<double>;
using ComplexField = BasicGridField<Complex>;
using RadialFunction = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Radial weight psi0: u = log psi0 solves u'' + u'/r = h(r), u(1) = u'(1) = 0.

/// 1 on r <= 1 - a, quintic smoothstep down to 0 at 1 - a/2, 0 beyond; times a3.
RadialFunction default_h(double a, double a3 = 1.0);
RadialFunction constant_h(double c);

class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(RadialFunction h, double r_min, double r_max, std::vector<double> u, std::vector<double> du);

  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  // log psi0 and its derivative by cubic Hermite interpolation of the RK4
  // nodes; outside [r_min, r_max] the profile is undefined (NaN).
  double log_psi(double r) const;
  double dlog_psi(double r) const;
  double psi(double r) const { return std::exp(log_psi(r)); }
  // Radial Laplacian of log psi0, i.e. h(r).
  double laplacian(double r) const { return h_(r); }
  const RadialFunction& h() const { return h_; }

 private:
  RadialFunction h_;
  double r_min_ = 0.0, r_max_ = 0.0, dr_ = 0.0;
  std::vector<double> u_, du_;
};

/// Classical RK4 for (u, u') from r = 1 backward to r_min and forward to
/// r_max, with `steps` steps per unit length.
RadialProfile solve_radial(const RadialFunction& h, double r_min, double r_max, int steps = 4000);

/// Checks h >= 0, h >= a3 on (1 - 2a, 1 - a) and h = 0 beyond 1 - a/2 on a
/// dense radius grid (ValidationError otherwise), then solves on [1 - 2a, 2].
RadialProfile build_psi0(double a, const RadialFunction& h, double a3 = 1.0, int steps = 4000);

struct Psi0Report {
  double a1 = 0.0, a2 = 0.0;       // min / max of psi0 on [1 - 2a, r_max]
  double value_at_1 = 0.0;         // log psi0(1)
  double slope_at_1 = 0.0;         // (log psi0)'(1)
  double min_laplacian_annulus = 0.0;  // min of u'' + u'/r over (1 - 2a, 1 - a), central differences
  double max_residual = 0.0;       // max |u'' + u'/r - h| at the RK4 nodes, central differences
  double max_outside = 0.0;        // max |log psi0| for r > 1
};

Psi0Report check_psi0(const RadialProfile& p, double a);

// ---------------------------------------------------------------------------
// Composite weight Phi = Phi0^{[psi]} |P|^{-2 [P]} e^{t |z|^2} with
// Phi0(z) = psi0((z - z_nu) / delta) on D_nu and 1 elsewhere.

struct Weight {
  std::vector<Point> centers;
  double delta = 1.0;
  double a = 0.1;
  double t = 1.0;
  bool use_psi0 = true;
  bool use_P = false;
  RadialProfile psi0;

  // Outside every closed inner disk D_nu(a) = {|z - z_nu| <= (1 - 2a) delta}.
  bool defined(Point z) const;
  bool in_annuli(Point z) const;  // z in A = union of A_nu
  double log_phi0(Point z) const;
  double lap_log_phi0(Point z) const;
  double log_abs_P2(Point z) const;  // log |P(z)|^2
  double log_phi(Point z) const;
  double lap_log_phi(Point z) const;  // analytic; the log|P|^2 part is harmonic off the centres
  double phi(Point z) const { return std::exp(log_phi(z)); }
};

/// Requires t > 0, delta > 0, 0 < a < 1/4 and centres separated by more than 2 delta.
Weight build_weight(std::vector<Point> centers, double delta, double a, double t, bool use_psi0 = true,
                    bool use_P = false, const RadialFunction& h = {});

struct WeightFields {
  GridField phi;    // NaN where undefined
  GridField abs_P;  // |P|
};

/// Samples Phi and |P| on a planar grid; cells within 2h of a centre are masked out.
WeightFields sample_weight(const Weight& w, Point origin, double side, int n);

// ---------------------------------------------------------------------------
// Discrete complex derivatives, fourth-order central differences. Nodes
// within two of the window edge get 0.

ComplexField dx(const ComplexField& u);
ComplexField dy(const ComplexField& u);
ComplexField dbar(const ComplexField& u);  // (d_x + i d_y) / 2
ComplexField del(const ComplexField& u);   // (d_x - i d_y) / 2
/// Adjoint of dbar in L^2(e^{-phi} dx dy): -e^{phi} del(e^{-phi} v).
ComplexField dbar_adjoint(const ComplexField& v, const GridField& phi);
/// Fourth-order 5 + 5 point Laplacian of a real field (0 near the edges).
GridField laplacian(const GridField& f);

ComplexField to_complex(const GridField& f);

// ---------------------------------------------------------------------------
// Compactly supported test functions: sums of bumps
// amp exp(1 - 1 / (1 - |z - c|^2 / rho^2)) on |z - c| < rho, exactly 0 outside.

struct Bump {
  Point center;
  double radius = 1.0;
  Complex amp = 1.0;
};

struct TestFunction {
  std::vector<Bump> bumps;

  Complex operator()(Point z) const;
  Box support() const;
  double min_radius() const;
};

/// 1-5 bumps. With centres in the weight: each bump sits outside every
/// D_nu(a), radius in [0.3, 1.2] delta, at a random gap of up to 1.5 delta
/// from a random inner disk (so some reach the annuli). Without centres:
/// bump centres in 0.5 D, radii in [0.1, 0.4]. Real-valued unless complex_amp.
TestFunction random_test_function(const Weight& w, std::uint64_t seed, bool complex_amp);

// ---------------------------------------------------------------------------

struct SubharmonicCheck {
  double lhs = 0.0;  // int |dbar u|^2 Phi
  double rhs = 0.0;  // int (1/4) Delta log Phi |u|^2 Phi
  double margin = 0.0;
  double norm2 = 0.0;  // int |u|^2 Phi
  bool holds = false;  // margin >= -1e-6 (lhs + |rhs|)
};

/// Grid over the support of u with spacing `spacing` (default: smallest bump
/// radius / 40). u must vanish wherever Phi is undefined.
SubharmonicCheck check_subharmonic_inequality(const TestFunction& u, const Weight& w, double spacing = 0.0);

struct C1Check {
  double lhs = 0.0;        // int |Delta f|^2 |P|^-2 e^{t|z|^2}
  double t2_term = 0.0;    // t^2 int f^2 |P|^-2 e^{t|z|^2}
  double grad_term = 0.0;  // delta^-2 int_A |grad f|^2 |P|^-2 e^{t|z|^2}
  double constant = 0.0;   // lhs / (t2_term + grad_term)
  bool degenerate = false;
};

/// f real (imaginary parts of the bump amplitudes are ignored). Throws
/// ValidationError when |f| > 1e-10 somewhere on the union of D_nu(a).
C1Check carleman_c1_check(const TestFunction& f, const Weight& w, double spacing = 0.0);

}  // namespace ngl::carleman
