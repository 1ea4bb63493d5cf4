#include "ngl/eigen.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "ngl/rng.hpp"

namespace ngl::eigen {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Operators assemble_operators(const surface::ConformalMetric& metric) {
  const int n = metric.grid_n();
  const double h = metric.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const long size = static_cast<long>(n) * n;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * size);
  auto idx = [n](int ix, int iy) { return static_cast<long>(((iy % n + n) % n)) * n + ((ix % n + n) % n); };
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const long k = idx(ix, iy);
      trip.emplace_back(k, k, 4.0 * inv_h2);
      trip.emplace_back(k, idx(ix + 1, iy), -inv_h2);
      trip.emplace_back(k, idx(ix - 1, iy), -inv_h2);
      trip.emplace_back(k, idx(ix, iy + 1), -inv_h2);
      trip.emplace_back(k, idx(ix, iy - 1), -inv_h2);
    }
  Operators ops;
  ops.grid_n = n;
  ops.spacing = h;
  ops.profile = metric.profile();
  ops.L.resize(size, size);
  ops.L.setFromTriplets(trip.begin(), trip.end());
  ops.q = Eigen::Map<const VectorXd>(metric.q().values().data(), size);
  return ops;
}

double residual(const Operators& ops, const GridField& phi, double lambda) {
  const Eigen::Map<const VectorXd> v(phi.values().data(), phi.values().size());
  const VectorXd r = ops.L * v - lambda * ops.q.cwiseProduct(v);
  return r.norm() / v.norm();
}

int required_grid_n(double lambda_max, double q_plus) {
  const int w = static_cast<int>(std::ceil(10.0 * std::sqrt(std::max(lambda_max, 0.0)) * std::sqrt(q_plus) / two_pi));
  return std::max(128, w * 8);
}

std::vector<double> flat_discrete_eigenvalues(int grid_n, int count) {
  const double h = 1.0 / grid_n;
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(grid_n) * grid_n);
  for (int m = 0; m < grid_n; ++m)
    for (int n = 0; n < grid_n; ++n)
      all.push_back(2.0 / (h * h) * (2.0 - std::cos(two_pi * m * h) - std::cos(two_pi * n * h)));
  std::sort(all.begin(), all.end());
  all.resize(std::min<std::size_t>(all.size(), count));
  return all;
}

EigenPair analytic_eigenpair(int m, int n, double theta, int grid_n) {
  if (grid_n < 16) throw ValidationError("grid_n must be at least 16");
  EigenPair pair;
  pair.lambda = 4.0 * pi * pi * (m * m + n * n);
  if (m == 0 && n == 0) {
    pair.field = GridField::sample_torus(grid_n, [](double, double) { return 1.0; });
  } else {
    pair.field = GridField::sample_torus(
        grid_n, [&](double x, double y) { return std::cos(two_pi * (m * x + n * y) - theta); });
    pair.field.values() /= pair.field.max_abs();
  }
  auto metric = surface::make_metric({"flat"}, grid_n);
  pair.residual = residual(assemble_operators(metric), pair.field, pair.lambda);
  return pair;
}

namespace {

// Shift-invert operator in symmetric form, S = Q^{1/2} (L + sigma Q)^{-1} Q^{1/2}.
class ShiftInvert {
 public:
  ShiftInvert(const Operators& ops, double sigma) : sqrt_q_(ops.q.cwiseSqrt()) {
    Eigen::SparseMatrix<double> k = ops.L;
    for (long i = 0; i < k.rows(); ++i) k.coeffRef(i, i) += sigma * ops.q(i);
    solver_.compute(k);
    if (solver_.info() != Eigen::Success) throw NumericalError("factorization of the shifted operator failed");
  }

  MatrixXd apply(const MatrixXd& x) const {
    MatrixXd rhs = sqrt_q_.asDiagonal() * x;
    MatrixXd y = solver_.solve(rhs);
    return sqrt_q_.asDiagonal() * y;
  }

 private:
  VectorXd sqrt_q_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver_;
};

// A = Q^{-1/2} L Q^{-1/2} applied to a block.
MatrixXd apply_a(const Operators& ops, const VectorXd& inv_sqrt_q, const MatrixXd& y) {
  MatrixXd t = inv_sqrt_q.asDiagonal() * y;
  MatrixXd u = ops.L * t;
  return inv_sqrt_q.asDiagonal() * u;
}

// Orthonormalizes the columns of z against basis.leftCols(used) and against
// each other (two Gram-Schmidt passes). Columns that collapse are replaced by
// random directions.
void orthonormalize(const MatrixXd& basis, long used, MatrixXd& z, RngStream& rng) {
  const long n = z.rows();
  for (long c = 0; c < z.cols(); ++c) {
    double scale = z.col(c).norm();
    for (int attempt = 0;; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        if (used > 0) {
          const VectorXd coef = basis.leftCols(used).transpose() * z.col(c);
          z.col(c) -= basis.leftCols(used) * coef;
        }
        for (long p = 0; p < c; ++p) z.col(c) -= z.col(p).dot(z.col(c)) * z.col(p);
      }
      const double nrm = z.col(c).norm();
      if (nrm > 1e-10 * scale && nrm > 0.0) {
        z.col(c) /= nrm;
        break;
      }
      if (attempt > 5) throw NumericalError("could not extend the Krylov basis");
      for (long i = 0; i < n; ++i) z(i, c) = rng.uniform(-1.0, 1.0);
      scale = z.col(c).norm();
    }
  }
}

struct Ritz {
  VectorXd theta;  // descending
  MatrixXd u;
};

Ritz ritz_descending(const MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (h + h.transpose()));
  const long k = h.rows();
  Ritz r{VectorXd(k), MatrixXd(k, k)};
  for (long i = 0; i < k; ++i) {
    r.theta(i) = es.eigenvalues()(k - 1 - i);
    r.u.col(i) = es.eigenvectors().col(k - 1 - i);
  }
  return r;
}

}  // namespace

Spectrum solve_spectrum(const Operators& ops, int count, double tol, const SolveOptions& options) {
  const long size = ops.L.rows();
  if (count < 1) throw ValidationError("eigen count must be positive");
  if (count > size / 4) throw ValidationError("eigen count must be at most grid_n^2/4");
  if (!(tol >= 1e-10)) throw ValidationError("eigen tolerance must be at least 1e-10");
  const int b = std::max(1, options.block);
  const long keep = std::min<long>(count + std::max(b, 8), size / 2);
  const long max_basis = std::min<long>(keep + static_cast<long>(options.extra_blocks) * b, size);
  if (!(options.shift > 0.0)) throw ValidationError("eigensolver shift must be positive");
  const double sigma = options.shift;

  const ShiftInvert s(ops, sigma);
  const VectorXd inv_sqrt_q = ops.q.cwiseSqrt().cwiseInverse();
  RngStream rng(options.seed, 0x5eed);

  MatrixXd v(size, max_basis), sv(size, max_basis), h = MatrixXd::Zero(max_basis, max_basis);
  long used = 0;
  MatrixXd block(size, b);
  for (long i = 0; i < size; ++i)
    for (int c = 0; c < b; ++c) block(i, c) = rng.uniform(-1.0, 1.0);
  orthonormalize(v, 0, block, rng);

  // Lanczos convergence target on the shift-inverted problem; the polish
  // below takes the residual the rest of the way on the original operator.
  const double inner_tol = 1e-8;
  Ritz ritz;
  bool converged = false;
  for (int restart = 0; restart <= options.max_restarts && !converged; ++restart) {
    while (used + b <= max_basis) {
      v.middleCols(used, b) = block;
      sv.middleCols(used, b) = s.apply(block);
      const MatrixXd coef = v.leftCols(used + b).transpose() * sv.middleCols(used, b);
      h.block(0, used, used + b, b) = coef;
      h.block(used, 0, b, used + b) = coef.transpose();
      used += b;
      block = sv.middleCols(used - b, b);
      orthonormalize(v, used, block, rng);
    }
    ritz = ritz_descending(h.topLeftCorner(used, used));
    const MatrixXd uk = ritz.u.leftCols(keep);
    MatrixXd vk = v.leftCols(used) * uk;
    MatrixXd svk = sv.leftCols(used) * uk;
    MatrixXd res = svk - vk * ritz.theta.head(keep).asDiagonal();
    converged = true;
    for (int i = 0; i < count; ++i)
      if (res.col(i).norm() > inner_tol * ritz.theta(i)) converged = false;

    if (std::getenv("NGL_EIGEN_TRACE")) {
      double worst = 0;
      for (int i = 0; i < count; ++i) worst = std::max(worst, res.col(i).norm() / ritz.theta(i));
      const double orth = (vk.transpose() * vk - MatrixXd::Identity(keep, keep)).norm();
      std::fprintf(stderr, "restart %d worst %.3e orth %.3e\n", restart, worst, orth);
    }
    v.leftCols(keep) = vk;
    sv.leftCols(keep) = svk;
    h.setZero();
    h.topLeftCorner(keep, keep) = ritz.theta.head(keep).asDiagonal();
    used = keep;
    if (converged) break;

    // Next block: dominant directions of the residual block (rank <= b in
    // exact arithmetic for block Krylov).
    for (int pass = 0; pass < 2; ++pass) res -= v.leftCols(used) * (v.leftCols(used).transpose() * res);
    Eigen::SelfAdjointEigenSolver<MatrixXd> gram(res.transpose() * res);
    for (int c = 0; c < b; ++c) {
      const long k = keep - 1 - c;
      const double ev = gram.eigenvalues()(k);
      if (ev > 0.0)
        block.col(c) = res * gram.eigenvectors().col(k) / std::sqrt(ev);
      else
        for (long i = 0; i < size; ++i) block(i, c) = rng.uniform(-1.0, 1.0);
    }
    orthonormalize(v, used, block, rng);
  }

  // Subspace-iteration polish with Rayleigh-Ritz on A itself: one more
  // application of S damps the high-frequency part of each residual.
  MatrixXd y = v.leftCols(keep);
  VectorXd lambda(keep);
  VectorXd resid(count);
  double best = std::numeric_limits<double>::infinity();
  for (int polish = 0; polish < 6; ++polish) {
    if (polish > 0) {
      y = s.apply(y);
      orthonormalize(v, 0, y, rng);
    }
    const MatrixXd ay = apply_a(ops, inv_sqrt_q, y);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(y.transpose() * ay);
    y = y * es.eigenvectors();
    lambda = es.eigenvalues();
    const MatrixXd r = ay * es.eigenvectors() - y * lambda.asDiagonal();
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      // Residual of the generalized problem for phi = Q^{-1/2} y.
      const VectorXd phi = inv_sqrt_q.cwiseProduct(y.col(i));
      resid(i) = (ops.q.cwiseSqrt().cwiseProduct(r.col(i))).norm() / phi.norm();
      worst = std::max(worst, resid(i));
    }
    best = std::min(best, worst);
    if (std::getenv("NGL_EIGEN_TRACE")) std::fprintf(stderr, "polish %d worst %.3e\n", polish, worst);
    if (converged && worst <= tol) break;
    if (polish == 5 || !converged)
      throw NumericalError("eigensolver did not converge; best residual " + std::to_string(best));
  }

  Spectrum out;
  out.profile = ops.profile;
  out.grid_n = ops.grid_n;
  for (int i = 0; i < count; ++i) {
    EigenPair p;
    p.lambda = lambda(i);
    if (p.lambda < 0.0) {
      if (p.lambda < -1e-8) throw NumericalError("negative eigenvalue from a semidefinite problem");
      p.lambda = 0.0;
    }
    p.field = GridField::torus(ops.grid_n);
    Eigen::Map<VectorXd>(p.field.values().data(), size) = inv_sqrt_q.cwiseProduct(y.col(i));
    // Fix the sign so the largest-magnitude sample is positive, then sup-normalize.
    Eigen::Map<VectorXd> flat(p.field.values().data(), size);
    Eigen::Index arg;
    flat.cwiseAbs().maxCoeff(&arg);
    const double peak = flat(arg);
    p.field.values() /= peak;
    p.residual = residual(ops, p.field, p.lambda);
    out.pairs.push_back(std::move(p));
  }
  return out;
}

}  // namespace ngl::eigen
