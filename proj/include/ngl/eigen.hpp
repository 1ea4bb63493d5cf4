#pragma once

#include <Eigen/Sparse>

#include <cstdint>
#include <vector>

#include "ngl/grid_field.hpp"
#include "ngl/surface.hpp"

namespace ngl::eigen {

// Discrete form of -Laplace(phi) = lambda q phi on the periodic torus grid.
// L is the negated 5-point Laplacian (positive semidefinite, L * 1 = 0) and
// Q = diag(q). Unknown k = iy * n + ix, matching GridField storage.
struct Operators {
  int grid_n = 0;
  double spacing = 0.0;
  Eigen::SparseMatrix<double> L;
  Eigen::VectorXd q;
  surface::MetricProfile profile;
};

Operators assemble_operators(const surface::ConformalMetric& metric);

struct EigenPair {
  double lambda = 0.0;
  GridField field;        // sup-normalized
  double residual = 0.0;  // ||L phi - lambda Q phi|| / ||phi||
};

struct Spectrum {
  std::vector<EigenPair> pairs;  // ascending in lambda
  surface::MetricProfile profile;
  int grid_n = 0;
};

struct SolveOptions {
  double shift = 1.0;  // sigma in (L + sigma Q)^{-1}, must be positive
  int block = 8;
  int extra_blocks = 8;  // basis grows by this many blocks between restarts
  int max_restarts = 400;
  std::uint64_t seed = 1;
};

/// The `count` smallest eigenpairs by block shift-invert Lanczos with thick
/// restarts, finished with a subspace-iteration polish against the original
/// operator. Throws NumericalError with the best residual on failure.
Spectrum solve_spectrum(const Operators& ops, int count, double tol, const SolveOptions& options = {});

/// cos(2 pi (m x + n y) - theta) sampled on the torus, lambda = 4 pi^2 (m^2 + n^2).
/// theta = pi/2 with (1, 0) gives sin(2 pi x); (0, 0) gives the constant pair.
/// The residual is taken against the discrete stencil with the continuum lambda.
EigenPair analytic_eigenpair(int m, int n, double theta, int grid_n);

double residual(const Operators& ops, const GridField& phi, double lambda);

// Smallest admissible grid size for eigenvalues up to lambda_max: at least
// ten samples per wavelength, rounded up to a multiple of 8.
int required_grid_n(double lambda_max, double q_plus);

// Exact eigenvalues of the discrete operator for q == 1, ascending, first `count`.
std::vector<double> flat_discrete_eigenvalues(int grid_n, int count);

}  // namespace ngl::eigen
