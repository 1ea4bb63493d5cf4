#include "ngl/growth.hpp"

#include <algorithm>

#include "ngl/nodal.hpp"
#include "ngl/parallel.hpp"

namespace ngl::growth {

double log_ratio(double outer, double inner) {
  if (inner == 0.0) throw NumericalError("field vanishes identically on the inner disk (infinite growth)");
  double beta = std::log(outer / inner);
  if (beta < 0.0 && beta >= -1e-9) beta = 0.0;
  return beta;
}

double growth_exponent(const GridField& f, Point center, double r, double alpha) {
  return growth_exponent(f, center, r, alpha, Lattice::of(f));
}

double growth_exponent(const GridField& f, const surface::MetricDisk& outer, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("growth alpha must lie in (0, 1)");
  const Lattice lat = Lattice::of(f);
  return log_ratio(sup_on_region(f, outer, lat), sup_on_region(f, outer.with_radius(alpha * outer.radius), lat));
}

double growth_exponent(const GridField& f, Point center, double r, double alpha, const surface::ConformalMetric& metric) {
  if (!(r > 0.0)) throw ValidationError("growth radius must be positive");
  return growth_exponent(f, surface::make_metric_disk(metric, center, r), alpha);
}

double lq_growth_exponent(const GridField& f, Point center, double r, double alpha, double qexp) {
  return lq_growth_exponent(f, center, r, alpha, qexp, Lattice::of(f));
}

double lq_growth_exponent(const GridField& f, Point center, double r, double alpha, double qexp,
                          const surface::ConformalMetric& metric) {
  if (qexp == infinite_exponent) return growth_exponent(f, center, r, alpha, metric);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("growth alpha must lie in (0, 1)");
  const auto outer = surface::make_metric_disk(metric, center, r);
  const Lattice lat = Lattice::of(f);
  return log_ratio(lq_norm_on_region(f, outer, lat, qexp), lq_norm_on_region(f, outer.with_radius(alpha * r), lat, qexp));
}

double wavelength_radius(double lambda, double k0, double spacing) {
  if (!(lambda > 0.0)) throw ValidationError("growth needs lambda > 0 (the constant eigenfunction has no growth field)");
  if (!(k0 > 0.0)) throw ValidationError("k0 must be positive");
  const double r = k0 / std::sqrt(lambda);
  if (r < 10.0 * spacing)
    throw ValidationError("wavelength radius k0 lambda^{-1/2} = " + std::to_string(r) +
                          " is below 10 grid cells; use grid_n >= " + std::to_string(growth_grid_n(lambda, k0)));
  return r;
}

int growth_grid_n(double lambda_max, double k0) {
  const double n = 10.0 * std::sqrt(lambda_max) / k0;
  return static_cast<int>(std::ceil(n / 8.0)) * 8;
}

std::vector<Point> sample_centers(int m) {
  if (m < 2) throw ValidationError("sample grid must be at least 2 x 2");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(m) * m);
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a) out.push_back({(a + 0.5) / m, (b + 0.5) / m});
  return out;
}

std::vector<std::vector<GrowthSample>> growth_fields(const std::vector<const eigen::EigenPair*>& pairs,
                                                     const surface::ConformalMetric& metric, double k0,
                                                     int sample_grid_m) {
  const auto centers = sample_centers(sample_grid_m);
  std::vector<double> radii;
  double r_max = 0.0;
  for (const auto* p : pairs) {
    if (p->field.n() != metric.grid_n()) throw ValidationError("eigenfunction grid does not match the metric grid");
    radii.push_back(wavelength_radius(p->lambda, k0, metric.spacing()));
    r_max = std::max(r_max, radii.back());
  }
  const double alpha = metric.alpha0();
  std::vector<std::vector<GrowthSample>> out(pairs.size(), std::vector<GrowthSample>(centers.size()));
  parallel_for(centers.size(), [&](std::size_t c) {
    const auto disk = surface::make_metric_disk(metric, centers[c], r_max);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double beta = growth_exponent(pairs[i]->field, disk.with_radius(radii[i]), alpha);
      out[i][c] = {centers[c], beta, radii[i], alpha};
    }
  });
  return out;
}

std::vector<GrowthSample> growth_field(const eigen::EigenPair& pair, const surface::ConformalMetric& metric, double k0,
                                       int sample_grid_m) {
  return growth_fields({&pair}, metric, k0, sample_grid_m).front();
}

double average_growth_power(const std::vector<GrowthSample>& samples, const surface::ConformalMetric& metric,
                            double qexp) {
  if (samples.size() < 4) throw ValidationError("average growth needs at least 4 samples");
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    const double w = metric.q_at(s.p);
    num += w * (qexp == 1.0 ? s.beta : std::pow(s.beta, qexp));
    den += w;
  }
  return num / den;
}

double average_local_growth(const std::vector<GrowthSample>& samples, const surface::ConformalMetric& metric) {
  return average_growth_power(samples, metric, 1.0);
}

namespace {

void summarize(Theorem1Report& rep) {
  rep.lower_min = rep.upper_min = rep.df_constant = std::numeric_limits<double>::infinity();
  rep.lower_max = rep.upper_max = 0.0;
  rep.df_constant = 0.0;
  for (const auto& r : rep.rows) {
    rep.lower_min = std::min(rep.lower_min, r.lower_ratio);
    rep.lower_max = std::max(rep.lower_max, r.lower_ratio);
    rep.upper_min = std::min(rep.upper_min, r.upper_ratio);
    rep.upper_max = std::max(rep.upper_max, r.upper_ratio);
    rep.df_constant = std::max(rep.df_constant, r.max_beta / std::sqrt(r.lambda));
  }
}

}  // namespace

Theorem1Report verify_theorem1(const surface::ConformalMetric& metric, const eigen::Spectrum& spectrum, double k0,
                               int sample_grid_m) {
  std::vector<const eigen::EigenPair*> family;
  for (const auto& p : spectrum.pairs)
    if (p.lambda > 1e-8) family.push_back(&p);
  if (family.empty()) throw ValidationError("spectrum has no nonconstant eigenpairs");

  Theorem1Report rep;
  rep.k0 = k0;
  rep.sample_grid_m = sample_grid_m;
  rep.samples = growth_fields(family, metric, k0, sample_grid_m);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& p = *family[i];
    Theorem1Row row;
    row.lambda = p.lambda;
    row.A = average_local_growth(rep.samples[i], metric);
    row.H1_metric = nodal::nodal_length(nodal::extract_nodal_set(p.field), &metric).metric;
    const double s = std::sqrt(p.lambda);
    row.lower_ratio = row.A > 0.0 ? row.H1_metric / (s * row.A) : std::numeric_limits<double>::infinity();
    row.upper_ratio = row.H1_metric / (s * (row.A + 1.0));
    for (const auto& g : rep.samples[i]) row.max_beta = std::max(row.max_beta, g.beta);
    rep.rows.push_back(row);
  }
  summarize(rep);
  return rep;
}

Theorem1Report truncate_report(const Theorem1Report& report, std::size_t count) {
  Theorem1Report out = report;
  out.rows.resize(std::min(count, out.rows.size()));
  out.samples.resize(std::min(count, out.samples.size()));
  summarize(out);
  return out;
}

}  // namespace ngl::growth
