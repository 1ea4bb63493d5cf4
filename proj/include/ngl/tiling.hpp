#pragma once

#include <cstdint>
#include <vector>

#include "ngl/nodal.hpp"
#include "ngl/schrodinger.hpp"

namespace ngl::tiling {

// P = [-1/60, 1/60)^2.
inline constexpr double p_half = 1.0 / 60.0;
inline constexpr double p_side = 2.0 * p_half;

// A level-k square, stored by integer position so that sides halve exactly:
// side = delta0 / 2^level, corner = (-1/60, -1/60) + (ix, iy) * side.
struct Square {
  int level = 0;
  std::int64_t ix = 0;
  std::int64_t iy = 0;
};

struct TilingOptions {
  double delta0 = 0.0;  // 0 picks default_delta0(beta*)
  double M = 10.0;
  double a = 0.1;
  int k_max = 8;
  int probes_per_side = 3;
};

struct TilingState {
  double delta0 = 0.0;
  int n0 = 0;  // squares per side of P at level 0
  int level = 0;
  int k_max = 8;
  double M = 10.0;
  double a = 0.1;
  int probes_per_side = 3;
  double beta_star = 1.0;
  std::vector<std::vector<Square>> rapid;  // rapid[k] = R(k)
  std::vector<std::vector<Square>> slow;   // slow[k] = S(k)
  bool capped = false;                     // stopped at k_max with rapid squares left

  double side(int k) const { return std::ldexp(delta0, -k); }
  double side(const Square& s) const { return side(s.level); }
  Point corner(const Square& s) const { return {-p_half + s.ix * side(s), -p_half + s.iy * side(s)}; }

  // Areas in units of a level-k_max square, exact.
  std::uint64_t area_units(const Square& s) const { return std::uint64_t{1} << (2 * (k_max - s.level)); }
  std::uint64_t total_units() const { return std::uint64_t(n0) * n0 << (2 * k_max); }
  std::uint64_t slow_units() const;
  std::uint64_t rapid_units() const;  // current level only
  double unit_area() const { return side(k_max) * side(k_max); }
};

/// Largest dyadic fraction 2^{-d} (1/30) of the P side with delta < 1/60 and
/// delta beta* < 1/2.
double default_delta0(double beta_star);

/// A square is rapid when any of probes_per_side^2 candidate centres (cell
/// midpoints of a sub-lattice) carries an M-rapid disk of radius side.
bool square_is_rapid(const schrodinger::PlanarField& f, const TilingState& state, const Square& s);

/// Level-0 classification. Throws ValidationError when delta0 violates the
/// disk constraints or does not divide the P side.
TilingState init_tiling(const schrodinger::PlanarField& f, const TilingOptions& opts = {});

/// Splits every rapid square of the current level into 4 and classifies the
/// children. Throws ValidationError when there is nothing to refine; at k_max
/// it only sets the capped flag.
void refine(TilingState& state, const schrodinger::PlanarField& f);

/// init_tiling followed by refine until no rapid square is left or k_max.
TilingState run_tiling(const schrodinger::PlanarField& f, const TilingOptions& opts = {});

struct LevelCount {
  int level = 0;
  std::size_t rapid = 0;  // |I(k)|
  std::size_t slow = 0;   // |J(k)|
  double rapid_ratio = 0.0;  // |I(k)| delta0 / beta*
  double slow_ratio = 0.0;   // |J(k)| delta0 / beta*
};

std::vector<LevelCount> level_counts(const TilingState& state);

/// Zero set of F over P from an n x n planar sampling of the continuous field.
nodal::NodalSet nodal_set_on_p(const schrodinger::PlanarField& f, int n = 513);

struct SquareBudget {
  Square square;
  double length = 0.0;  // H1(Z_F cap S)
  double ratio = 0.0;   // length / (2^{-k} delta0)
};

std::vector<SquareBudget> slow_square_budgets(const TilingState& state, const std::vector<nodal::Segment>& segments);

struct TotalBound {
  double length_in_disk = 0.0;  // H1(Z_F cap (1/60) D)
  double beta_star = 1.0;
  double ratio = 0.0;
  double reconstructed = 0.0;   // sum over slow squares of clipped lengths
  double direct_covered = 0.0;  // length in the union of slow squares, by segment subdivision
  double max_budget_ratio = 0.0;
};

TotalBound total_bound_report(const TilingState& state, const std::vector<nodal::Segment>& segments);

struct Coverage {
  double uncovered_area = 0.0;
  std::size_t remaining_rapid = 0;
  std::size_t near_singular = 0;  // remaining rapid squares within 2 delta(k_max) of a singular point
};

Coverage coverage_check(const TilingState& state, const std::vector<Point>& singular_points);

}  // namespace ngl::tiling
