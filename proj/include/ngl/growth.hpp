#pragma once

#include <limits>
#include <vector>

#include "ngl/eigen.hpp"
#include "ngl/regions.hpp"
#include "ngl/surface.hpp"

namespace ngl::growth {

inline constexpr double infinite_exponent = std::numeric_limits<double>::infinity();

struct GrowthSample {
  Point p;
  double beta = 0.0;
  double outer_radius = 0.0;
  double alpha = 0.0;
};

// log(outer / inner) with the [-1e-9, 0) interpolation floor clamped to 0.
// Throws NumericalError when the inner value is 0.
double log_ratio(double outer, double inner);

/// beta(f, B; alpha) = log(sup_B |f| / sup_{alpha B} |f|) over concentric
/// Euclidean disks, for any point sampler.
template <PointSampler F>
double growth_exponent(const F& f, Point center, double r, double alpha, const Lattice& lattice) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("growth alpha must lie in (0, 1)");
  if (!(r > 0.0)) throw ValidationError("growth radius must be positive");
  return log_ratio(sup_on_region(f, EuclideanDisk{center, r}, lattice),
                   sup_on_region(f, EuclideanDisk{center, alpha * r}, lattice));
}

/// Euclidean disks on the field's own lattice (planar fields, or torus fields
/// without a metric).
double growth_exponent(const GridField& f, Point center, double r, double alpha);

/// Metric disks of radius r and alpha r on a torus field.
double growth_exponent(const GridField& f, Point center, double r, double alpha, const surface::ConformalMetric& metric);

/// Outer metric disk given; the inner disk reuses its distance patch.
double growth_exponent(const GridField& f, const surface::MetricDisk& outer, double alpha);

/// L^q version: log(||f||_{L^q(B)} / ||f||_{L^q(alpha B)}); qexp = infinity
/// dispatches to growth_exponent.
template <PointSampler F>
double lq_growth_exponent(const F& f, Point center, double r, double alpha, double qexp, const Lattice& lattice) {
  if (qexp == infinite_exponent) return growth_exponent(f, center, r, alpha, lattice);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("growth alpha must lie in (0, 1)");
  return log_ratio(lq_norm_on_region(f, EuclideanDisk{center, r}, lattice, qexp),
                   lq_norm_on_region(f, EuclideanDisk{center, alpha * r}, lattice, qexp));
}

double lq_growth_exponent(const GridField& f, Point center, double r, double alpha, double qexp);
double lq_growth_exponent(const GridField& f, Point center, double r, double alpha, double qexp,
                          const surface::ConformalMetric& metric);

/// Wavelength-scale radius k0 lambda^{-1/2}, checked against the grid:
/// throws ValidationError unless lambda > 0 and the radius spans >= 10 cells.
double wavelength_radius(double lambda, double k0, double spacing);

/// Smallest grid size (multiple of 8) for which k0 lambda^{-1/2} >= 10 h.
int growth_grid_n(double lambda_max, double k0);

/// Centres of an m x m midpoint grid over the torus, row-major.
std::vector<Point> sample_centers(int m);

/// beta_p(lambda) at the m x m sample centres, r = k0 lambda^{-1/2},
/// alpha = alpha0 of the metric, metric disks.
std::vector<GrowthSample> growth_field(const eigen::EigenPair& pair, const surface::ConformalMetric& metric, double k0,
                                       int sample_grid_m);

/// growth_field for several eigenfunctions at once. One distance patch per
/// centre (at the largest radius) serves every eigenfunction. Result [i][c]
/// is eigenfunction i at centre c. Parallel over centres.
std::vector<std::vector<GrowthSample>> growth_fields(const std::vector<const eigen::EigenPair*>& pairs,
                                                     const surface::ConformalMetric& metric, double k0,
                                                     int sample_grid_m);

/// A = sum beta_p q(p) / sum q(p) over the sample centres (the centre grid's
/// own quadrature of Vol(M), so beta == c gives exactly c).
double average_local_growth(const std::vector<GrowthSample>& samples, const surface::ConformalMetric& metric);

/// B^q: same average of beta_p^q.
double average_growth_power(const std::vector<GrowthSample>& samples, const surface::ConformalMetric& metric,
                            double qexp);

struct Theorem1Row {
  double lambda = 0.0;
  double A = 0.0;
  double H1_metric = 0.0;
  double lower_ratio = 0.0;  // H1 / (sqrt(lambda) A)
  double upper_ratio = 0.0;  // H1 / (sqrt(lambda) (A + 1))
  double max_beta = 0.0;     // max_p beta_p(lambda)
};

struct Theorem1Report {
  double k0 = 0.0;
  int sample_grid_m = 0;
  std::vector<Theorem1Row> rows;
  std::vector<std::vector<GrowthSample>> samples;  // parallel to rows
  double lower_min = 0.0, lower_max = 0.0;
  double upper_min = 0.0, upper_max = 0.0;
  double lower_spread() const { return lower_max / lower_min; }
  double upper_spread() const { return upper_max / upper_min; }
  // max over the family of max_p beta_p / sqrt(lambda)
  double df_constant = 0.0;
};

/// Ratio table over every nonconstant eigenpair of the spectrum.
Theorem1Report verify_theorem1(const surface::ConformalMetric& metric, const eigen::Spectrum& spectrum, double k0,
                               int sample_grid_m);

/// Summary statistics of an existing table restricted to its first `count` rows.
Theorem1Report truncate_report(const Theorem1Report& report, std::size_t count);

}  // namespace ngl::growth
