#include <doctest.h>

#include <Eigen/Dense>

#include "ngl/eigen.hpp"
#include "ngl/rng.hpp"

using namespace ngl;
using namespace ngl::eigen;

namespace {

surface::MetricProfile wave() { return {"wave", 0.2, 1, 1, 1.0}; }

// Smallest nonzero eigenvalue of (L, Q) by steepest descent on the discrete
// Rayleigh quotient, Q-orthogonal to constants, 2-D Rayleigh-Ritz line search.
double rayleigh_oracle(const Operators& ops, int starts) {
  const long n = ops.L.rows();
  const Eigen::VectorXd& q = ops.q;
  auto deflate = [&](Eigen::VectorXd& x) { x.array() -= q.dot(x) / q.sum(); };
  double best = 1e300;
  RngStream rng(2024, 1);
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd x(n);
    for (long i = 0; i < n; ++i) x(i) = rng.uniform(-1, 1);
    deflate(x);
    double rq = 0;
    for (int it = 0; it < 4000; ++it) {
      x /= std::sqrt(x.dot(q.cwiseProduct(x)));
      const Eigen::VectorXd lx = ops.L * x;
      rq = x.dot(lx);
      Eigen::VectorXd g = lx - rq * q.cwiseProduct(x);
      g = g.cwiseQuotient(q);
      deflate(g);
      if (g.norm() < 1e-12) break;
      Eigen::MatrixXd basis(n, 2);
      basis << x, g;
      Eigen::MatrixXd a = basis.transpose() * (ops.L * basis);
      Eigen::MatrixXd b = basis.transpose() * q.asDiagonal() * basis;
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
      x = basis * es.eigenvectors().col(0);
      deflate(x);
    }
    best = std::min(best, rq);
  }
  return best;
}

}  // namespace

TEST_CASE("assembled operators") {
  auto m = make_metric(wave(), 32);
  auto ops = assemble_operators(m);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(ops.L.rows());
  CHECK((ops.L * ones).cwiseAbs().maxCoeff() < 1e-9);
  Eigen::SparseMatrix<double> t = ops.L.transpose();
  CHECK((ops.L - t).norm() == 0.0);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i) CHECK(ops.q(j * 32 + i) == m.q().at(i, j));
}

TEST_CASE("flat torus spectrum") {
  auto ops = assemble_operators(surface::make_metric({"flat"}, 128));
  auto sp = solve_spectrum(ops, 10, 1e-6);
  REQUIRE(sp.pairs.size() == 10);
  CHECK(sp.pairs[0].lambda < 1e-8);
  CHECK(sp.pairs[0].field.values().minCoeff() == doctest::Approx(1.0).epsilon(1e-9));
  for (int i = 1; i <= 4; ++i) CHECK(sp.pairs[i].lambda == doctest::Approx(4 * pi * pi).epsilon(0.01));
  const auto exact = flat_discrete_eigenvalues(128, 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(sp.pairs[i].lambda == doctest::Approx(exact[i]).epsilon(1e-9));
    CHECK(sp.pairs[i].residual <= 1e-6);
    CHECK(residual(ops, sp.pairs[i].field, sp.pairs[i].lambda) == doctest::Approx(sp.pairs[i].residual));
    CHECK(sp.pairs[i].field.max_abs() == doctest::Approx(1.0).epsilon(1e-12));
    if (i > 0) CHECK(sp.pairs[i].lambda >= sp.pairs[i - 1].lambda);
  }
}

TEST_CASE("eigenvectors are Q-orthogonal") {
  auto ops = assemble_operators(surface::make_metric(wave(), 48));
  auto sp = solve_spectrum(ops, 12, 1e-6);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < i; ++j) {
      Eigen::Map<const Eigen::VectorXd> a(sp.pairs[i].field.values().data(), ops.L.rows());
      Eigen::Map<const Eigen::VectorXd> b(sp.pairs[j].field.values().data(), ops.L.rows());
      const double cosine = a.dot(ops.q.cwiseProduct(b)) /
                            std::sqrt(a.dot(ops.q.cwiseProduct(a)) * b.dot(ops.q.cwiseProduct(b)));
      CHECK(std::abs(cosine) < 1e-8);
    }
}

TEST_CASE("wave metric first eigenvalue matches Rayleigh quotient oracle") {
  auto ops = assemble_operators(surface::make_metric(wave(), 24));
  auto sp = solve_spectrum(ops, 4, 1e-6);
  const double oracle = rayleigh_oracle(ops, 50);
  CHECK(sp.pairs[1].lambda == doctest::Approx(oracle).epsilon(0.005));
}

TEST_CASE("analytic eigenpairs") {
  auto s = analytic_eigenpair(1, 0, pi / 2, 64);
  CHECK(s.lambda == doctest::Approx(4 * pi * pi));
  for (int i = 0; i < 64; ++i) CHECK(s.field.at(i, 5) == doctest::Approx(std::sin(two_pi * i / 64.0)));
  CHECK(analytic_eigenpair(3, 4, 0.0, 64).lambda == doctest::Approx(986.96).epsilon(1e-5));
  auto c = analytic_eigenpair(0, 0, 0.0, 32);
  CHECK(c.lambda == 0.0);
  CHECK(c.residual < 1e-9);
  // Discrete symbol deficit: lambda - (2/h^2)(1 - cos 2 pi h) ~ lambda (2 pi h)^2 / 12.
  const double h = 1.0 / 256;
  auto p = analytic_eigenpair(1, 0, 0.0, 256);
  CHECK(p.residual <= p.lambda * std::pow(two_pi * h, 2) / 12 * 1.1);
  CHECK(p.residual >= p.lambda * std::pow(two_pi * h, 2) / 12 * 0.9);
}

TEST_CASE("Weyl counting on the flat torus") {
  auto sp = solve_spectrum(assemble_operators(surface::make_metric({"flat"}, 128)), 38, 1e-6);
  for (int j = 0; j <= 9; ++j) {
    const double cut = 4 * pi * pi * (j + 0.5);
    int lattice = 0;
    for (int m = -4; m <= 4; ++m)
      for (int n = -4; n <= 4; ++n)
        if (4 * pi * pi * (m * m + n * n) <= cut) ++lattice;
    int computed = 0;
    for (const auto& p : sp.pairs)
      if (p.lambda <= cut) ++computed;
    CHECK(computed == lattice);
  }
}

TEST_CASE("scaling the metric divides the spectrum") {
  auto a = solve_spectrum(assemble_operators(surface::make_metric(wave(), 32)), 6, 1e-8);
  auto w2 = wave();
  w2.scale = 2.5;
  auto b = solve_spectrum(assemble_operators(surface::make_metric(w2, 32)), 6, 1e-8);
  for (int i = 1; i < 6; ++i) CHECK(b.pairs[i].lambda == doctest::Approx(a.pairs[i].lambda / 2.5).epsilon(1e-9));
}

TEST_CASE("solver preconditions and failure reporting") {
  auto ops = assemble_operators(surface::make_metric({"flat"}, 16));
  CHECK_THROWS_AS(solve_spectrum(ops, 65, 1e-6), ValidationError);
  CHECK_THROWS_AS(solve_spectrum(ops, 4, 1e-12), ValidationError);
  SolveOptions starved;
  starved.max_restarts = 0;
  starved.extra_blocks = 1;
  auto big = assemble_operators(surface::make_metric(wave(), 64));
  try {
    solve_spectrum(big, 40, 1e-10, starved);
    FAIL("expected non-convergence");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("best residual") != std::string::npos);
  }
}

TEST_CASE("resolution rule") {
  CHECK(required_grid_n(10.0, 1.0) == 128);
  // 10 sqrt(671)/(2 pi) = 41.2 -> 42 * 8
  CHECK(required_grid_n(671.0, 1.0) == 336);
}
