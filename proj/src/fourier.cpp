#include "ngl/fourier.hpp"

#include <map>

#include <unsupported/Eigen/FFT>

namespace ngl {

TrigInterpolant::TrigInterpolant(const GridField& f, double rel_cutoff) {
  if (!f.periodic()) throw ValidationError("trigonometric interpolation needs a torus field");
  const int n = f.n();
  Eigen::FFT<double> fft;
  // Transform rows (x direction) then columns (y direction).
  Eigen::MatrixXcd c(n, n);  // c(row = ky index, col = kx index)
  std::vector<double> in(n);
  std::vector<std::complex<double>> out(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) in[i] = f.at(i, j);
    fft.fwd(out, in);
    for (int i = 0; i < n; ++i) c(j, i) = out[i];
  }
  std::vector<std::complex<double>> col(n), colout(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) col[j] = c(j, i);
    fft.fwd(colout, col);
    for (int j = 0; j < n; ++j) c(j, i) = colout[j] / (static_cast<double>(n) * n);
  }
  const double largest = c.cwiseAbs().maxCoeff();
  auto freq = [n](int k) { return k <= n / 2 ? k : k - n; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      std::complex<double> v = c(j, i);
      if (std::abs(v) <= rel_cutoff * largest) continue;
      // Conjugate pairs make the sum real; a lone Nyquist term contributes
      // its real part, which still matches the samples.
      modes_.push_back({two_pi * freq(i), two_pi * freq(j), v.real(), v.imag()});
    }
}

double TrigInterpolant::operator()(double x, double y) const {
  double acc = 0.0;
  for (const auto& m : modes_) {
    const double ph = m.kx * x + m.ky * y;
    acc += m.re * std::cos(ph) - m.im * std::sin(ph);
  }
  return acc;
}

double TrigInterpolant::laplacian(double x, double y) const {
  double acc = 0.0;
  for (const auto& m : modes_) {
    const double ph = m.kx * x + m.ky * y;
    acc -= (m.kx * m.kx + m.ky * m.ky) * (m.re * std::cos(ph) - m.im * std::sin(ph));
  }
  return acc;
}

GridField::Values TrigInterpolant::sample_lattice(Point origin, double step, int nx, int ny) const {
  // Group by kx: G[kx](j) = sum_ky c e^{i ky y_j}, then sum over kx.
  std::map<double, Eigen::VectorXcd> rows;
  for (const auto& m : modes_) {
    auto [it, fresh] = rows.try_emplace(m.kx);
    if (fresh) it->second = Eigen::VectorXcd::Zero(ny);
    const std::complex<double> c(m.re, m.im);
    for (int j = 0; j < ny; ++j) it->second(j) += c * std::polar(1.0, m.ky * (origin.y + j * step));
  }
  GridField::Values out = GridField::Values::Zero(ny, nx);
  for (const auto& [kx, g] : rows)
    for (int i = 0; i < nx; ++i) {
      const std::complex<double> e = std::polar(1.0, kx * (origin.x + i * step));
      for (int j = 0; j < ny; ++j) out(j, i) += (e * g(j)).real();
    }
  return out;
}

}  // namespace ngl
