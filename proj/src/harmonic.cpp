#include "ngl/harmonic.hpp"

#include <complex>

#include <unsupported/Eigen/FFT>

#include "ngl/growth.hpp"
#include "ngl/rng.hpp"

namespace ngl::harmonic {

double CircleTrace::operator()(double theta) const {
  double v = a[0];
  for (std::size_t k = 1; k < a.size(); ++k) v += a[k] * std::cos(k * theta) + b[k] * std::sin(k * theta);
  return v;
}

CircleTrace make_trace(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 4) throw ValidationError("circle trace needs at least 4 samples");
  std::vector<std::complex<double>> c;
  Eigen::FFT<double> fft;
  fft.fwd(c, values);
  CircleTrace t;
  const std::size_t top = n / 2;
  t.a.assign(top + 1, 0.0);
  t.b.assign(top + 1, 0.0);
  t.a[0] = c[0].real() / n;
  for (std::size_t k = 1; k <= top; ++k) {
    // The Nyquist mode of an even-length trace appears once, not in a pair.
    const double w = (n % 2 == 0 && k == top) ? 1.0 / n : 2.0 / n;
    t.a[k] = w * c[k].real();
    t.b[k] = (n % 2 == 0 && k == top) ? 0.0 : -w * c[k].imag();
  }
  t.values = std::move(values);
  return t;
}

CircleTrace sample_trace(const std::function<double(double)>& v, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = v(two_pi * static_cast<double>(k) / static_cast<double>(n));
  return make_trace(std::move(s));
}

CircleTrace random_trace(int degree, std::uint64_t seed, std::size_t n) {
  if (degree < 0 || 2 * static_cast<std::size_t>(degree) >= n) throw ValidationError("trace degree must be < n / 2");
  const KeyedRng rng(seed, 0x7261);
  std::vector<double> a(degree + 1), b(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    a[k] = 2.0 * rng.uniform(2 * k) - 1.0;
    b[k] = k == 0 ? 0.0 : 2.0 * rng.uniform(2 * k + 1) - 1.0;
  }
  return sample_trace(
      [&](double th) {
        double v = a[0];
        for (int k = 1; k <= degree; ++k) v += a[k] * std::cos(k * th) + b[k] * std::sin(k * th);
        return v;
      },
      n);
}

SignChanges sign_changes(const std::vector<double>& samples) {
  double top = 0.0;
  for (double v : samples) top = std::max(top, std::abs(v));
  if (!(top > 0.0)) throw ValidationError("sign changes of an identically zero trace are undefined");
  const double floor = 1e-12 * top;
  SignChanges out;
  std::vector<int> signs;
  int run = 0, longest = 0;
  for (double v : samples) {
    if (std::abs(v) < floor) {
      longest = std::max(longest, ++run);
      continue;
    }
    run = 0;
    signs.push_back(v > 0 ? 1 : -1);
  }
  // A zero run may wrap around the end of the sample list.
  if (run > 0)
    for (double v : samples) {
      if (std::abs(v) >= floor) break;
      longest = std::max(longest, ++run);
    }
  out.flagged = longest > 2;
  for (std::size_t i = 0; i < signs.size(); ++i)
    if (signs[i] != signs[(i + 1) % signs.size()]) ++out.count;
  return out;
}

SignChanges sign_changes(const CircleTrace& trace) { return sign_changes(trace.values); }

double harmonic_value(const CircleTrace& trace, Point z) {
  const double r = norm(z);
  const double th = std::atan2(z.y, z.x);
  double v = trace.a[0];
  double rk = 1.0;
  for (std::size_t k = 1; k < trace.a.size(); ++k) {
    rk *= r;
    v += rk * (trace.a[k] * std::cos(k * th) + trace.b[k] * std::sin(k * th));
  }
  return v;
}

GridField harmonic_extend(const CircleTrace& trace, double rho, int n) {
  if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("extension radius must lie in (0, 1)");
  auto g = GridField::sample_planar(n, {-rho, -rho}, 2 * rho,
                                    [&](double x, double y) { return harmonic_value(trace, {x, y}); });
  g.set_disk_mask({0.0, 0.0}, rho);
  return g;
}

double circle_sup(const CircleTrace& trace, double rho, int m) {
  double best = 0.0;
  for (int k = 0; k < m; ++k) {
    const double t = two_pi * k / m;
    best = std::max(best, std::abs(harmonic_value(trace, {rho * std::cos(t), rho * std::sin(t)})));
  }
  return best;
}

Robertson robertson_constant(int p) {
  if (p < 0 || p > 31) throw ValidationError("Robertson constant is computed exactly for 0 <= p <= 31");
  Robertson r;
  r.p = p;
  unsigned __int128 central = 1;
  for (int i = 1; i <= p; ++i) central = central * static_cast<unsigned>(p + i) / static_cast<unsigned>(i);
  r.value = (std::uint64_t{1} << (2 * p)) + static_cast<std::uint64_t>(central);
  r.bound = 2.0 * std::pow(2.0 * std::numbers::e, 2 * p);
  r.within = static_cast<double>(r.value) <= r.bound;
  return r;
}

GrowthVsSigns growth_vs_signs_check(const CircleTrace& trace, double r0) {
  if (!(r0 > 0.0 && r0 < 0.5)) throw ValidationError("r0 must lie in (0, 1/2)");
  GrowthVsSigns g;
  g.n_v = sign_changes(trace).count;
  const double outer = circle_sup(trace, 0.5);
  const double inner = circle_sup(trace, r0);
  g.log_lhs = growth::log_ratio(outer, inner);
  g.lhs_ratio = std::exp(g.log_lhs);
  g.log_rhs = std::log(growth_prefactor) + g.n_v * std::log(growth_c5 / r0);
  g.rhs_bound = std::exp(g.log_rhs);
  g.holds = g.log_lhs <= g.log_rhs;
  return g;
}

double default_rho_minus(double rho_plus, double q_minus, double q_plus) {
  const double s = q_minus / q_plus;
  return rho_plus / 5.0 * s * s;
}

ZeroCountCheck zero_count_check(const schrodinger::PlanarField& f, double rho_plus, double rho_minus,
                                std::size_t trace_samples) {
  if (!(rho_minus > 0.0 && rho_minus < rho_plus && rho_plus < 0.5))
    throw ValidationError("need 0 < rho_minus < rho_plus < 1/2");
  ZeroCountCheck z;
  const Lattice lat{{0.0, 0.0}, rho_minus / 16.0};
  z.lhs = growth::log_ratio(sup_on_region(f, EuclideanDisk{{0, 0}, rho_plus}, lat),
                            sup_on_region(f, EuclideanDisk{{0, 0}, rho_minus}, lat));
  std::vector<double> trace(trace_samples);
  for (std::size_t k = 0; k < trace_samples; ++k) {
    const double t = two_pi * static_cast<double>(k) / static_cast<double>(trace_samples);
    trace[k] = f(std::cos(t), std::sin(t));
  }
  z.zero_count = sign_changes(trace).count;
  z.ratio = z.lhs / (1.0 + z.zero_count);
  return z;
}

}  // namespace ngl::harmonic
