#include "ngl/tiling.hpp"

#include <unordered_set>

#include "ngl/parallel.hpp"

namespace ngl::tiling {

namespace {

std::uint64_t pack(const Square& s) { return (std::uint64_t(s.ix) << 32) | std::uint64_t(s.iy); }

std::vector<Square> classify(const schrodinger::PlanarField& f, const TilingState& state,
                             const std::vector<Square>& squares, std::vector<Square>& slow_out) {
  std::vector<std::uint8_t> rapid(squares.size());
  parallel_for(squares.size(), [&](std::size_t i) { rapid[i] = square_is_rapid(f, state, squares[i]) ? 1 : 0; });
  std::vector<Square> rapid_out;
  for (std::size_t i = 0; i < squares.size(); ++i) (rapid[i] ? rapid_out : slow_out).push_back(squares[i]);
  return rapid_out;
}

}  // namespace

std::uint64_t TilingState::slow_units() const {
  std::uint64_t u = 0;
  for (const auto& level : slow)
    for (const Square& s : level) u += area_units(s);
  return u;
}

std::uint64_t TilingState::rapid_units() const {
  std::uint64_t u = 0;
  for (const Square& s : rapid.back()) u += area_units(s);
  return u;
}

double default_delta0(double beta_star) {
  double d = p_side;
  for (int k = 0; k < 60; ++k, d *= 0.5)
    if (d < p_half && d * beta_star < 0.5) return d;
  throw ValidationError("no dyadic delta0 satisfies the disk constraints");
}

bool square_is_rapid(const schrodinger::PlanarField& f, const TilingState& state, const Square& s) {
  // 0 <= anything: skip the integrals.
  if (state.M <= 0.0) return true;
  const double side = state.side(s);
  const Point c = state.corner(s);
  const int m = state.probes_per_side;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const Point z{c.x + (i + 0.5) / m * side, c.y + (j + 0.5) / m * side};
      if (schrodinger::classify_rapid(f, {z, side, state.a}, state.M).is_rapid) return true;
    }
  return false;
}

TilingState init_tiling(const schrodinger::PlanarField& f, const TilingOptions& opts) {
  if (opts.k_max < 0 || opts.k_max > 24) throw ValidationError("k_max must lie in [0, 24]");
  if (opts.probes_per_side < 1) throw ValidationError("probes_per_side must be >= 1");
  TilingState st;
  st.beta_star = schrodinger::beta_star(f).beta_star;
  st.delta0 = opts.delta0 > 0.0 ? opts.delta0 : default_delta0(st.beta_star);
  schrodinger::check_disk_constraints(st.delta0, st.beta_star);
  const double n0 = p_side / st.delta0;
  st.n0 = static_cast<int>(std::lround(n0));
  if (std::abs(n0 - st.n0) > 1e-9 * n0) throw ValidationError("delta0 must divide the side 1/30 of P");
  st.k_max = opts.k_max;
  st.M = opts.M;
  st.a = opts.a;
  st.probes_per_side = opts.probes_per_side;
  std::vector<Square> all;
  for (int iy = 0; iy < st.n0; ++iy)
    for (int ix = 0; ix < st.n0; ++ix) all.push_back({0, ix, iy});
  st.slow.emplace_back();
  st.rapid.push_back(classify(f, st, all, st.slow.back()));
  st.capped = st.k_max == 0 && !st.rapid.back().empty();
  return st;
}

void refine(TilingState& state, const schrodinger::PlanarField& f) {
  if (state.rapid.back().empty()) throw ValidationError("no rapid squares left to refine");
  if (state.level >= state.k_max) {
    state.capped = true;
    return;
  }
  std::vector<Square> children;
  children.reserve(4 * state.rapid.back().size());
  for (const Square& s : state.rapid.back())
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) children.push_back({s.level + 1, 2 * s.ix + a, 2 * s.iy + b});
  ++state.level;
  state.slow.emplace_back();
  state.rapid.push_back(classify(f, state, children, state.slow.back()));
  state.capped = state.level >= state.k_max && !state.rapid.back().empty();
}

TilingState run_tiling(const schrodinger::PlanarField& f, const TilingOptions& opts) {
  TilingState st = init_tiling(f, opts);
  while (!st.rapid.back().empty() && st.level < st.k_max) refine(st, f);
  return st;
}

std::vector<LevelCount> level_counts(const TilingState& state) {
  std::vector<LevelCount> out;
  for (int k = 0; k <= state.level; ++k) {
    LevelCount c;
    c.level = k;
    c.rapid = state.rapid[k].size();
    c.slow = state.slow[k].size();
    c.rapid_ratio = c.rapid * state.delta0 / state.beta_star;
    c.slow_ratio = c.slow * state.delta0 / state.beta_star;
    out.push_back(c);
  }
  return out;
}

nodal::NodalSet nodal_set_on_p(const schrodinger::PlanarField& f, int n) {
  if (n < 8) throw ValidationError("nodal sampling of P needs n >= 8");
  const auto g = GridField::sample_planar(n, {-p_half, -p_half}, p_side, f.exact);
  return nodal::extract_nodal_set(g);
}

std::vector<SquareBudget> slow_square_budgets(const TilingState& state, const std::vector<nodal::Segment>& segments) {
  std::vector<SquareBudget> out;
  for (const auto& level : state.slow)
    for (const Square& s : level) {
      SquareBudget b;
      b.square = s;
      b.length = nodal::clipped_length_in_square(segments, state.corner(s), state.side(s));
      b.ratio = b.length / state.side(s);
      out.push_back(b);
    }
  return out;
}

TotalBound total_bound_report(const TilingState& state, const std::vector<nodal::Segment>& segments) {
  TotalBound t;
  t.beta_star = state.beta_star;
  t.length_in_disk = nodal::clipped_length_in_disk(segments, {0.0, 0.0}, p_half);
  t.ratio = t.length_in_disk / t.beta_star;
  for (const auto& b : slow_square_budgets(state, segments)) {
    t.reconstructed += b.length;
    t.max_budget_ratio = std::max(t.max_budget_ratio, b.ratio);
  }

  // Independent route: chop segments finely and test each midpoint against
  // the slow squares of every level.
  std::vector<std::unordered_set<std::uint64_t>> lookup(state.slow.size());
  int finest = 0;
  for (std::size_t k = 0; k < state.slow.size(); ++k) {
    for (const Square& s : state.slow[k]) lookup[k].insert(pack(s));
    if (!state.slow[k].empty()) finest = static_cast<int>(k);
  }
  const double piece = state.side(finest) / 64.0;
  auto covered = [&](Point z) {
    if (z.x < -p_half || z.y < -p_half || z.x >= p_half || z.y >= p_half) return false;
    for (std::size_t k = 0; k < lookup.size(); ++k) {
      if (lookup[k].empty()) continue;
      const double side = state.side(static_cast<int>(k));
      const Square s{static_cast<int>(k), static_cast<std::int64_t>(std::floor((z.x + p_half) / side)),
                     static_cast<std::int64_t>(std::floor((z.y + p_half) / side))};
      if (lookup[k].count(pack(s))) return true;
    }
    return false;
  };
  for (const auto& seg : segments) {
    const double len = distance(seg.a, seg.b);
    const int m = std::max(1, static_cast<int>(std::ceil(len / piece)));
    for (int i = 0; i < m; ++i) {
      const double u = (i + 0.5) / m;
      if (covered(seg.a + u * (seg.b - seg.a))) t.direct_covered += len / m;
    }
  }
  return t;
}

Coverage coverage_check(const TilingState& state, const std::vector<Point>& singular_points) {
  Coverage c;
  c.uncovered_area = static_cast<double>(state.total_units() - state.slow_units()) * state.unit_area();
  c.remaining_rapid = state.rapid.back().size();
  const double reach = 2.0 * state.side(state.k_max);
  for (const Square& s : state.rapid.back()) {
    const Point lo = state.corner(s);
    const double side = state.side(s);
    for (const Point& p : singular_points) {
      const double dx = std::max({lo.x - p.x, 0.0, p.x - lo.x - side});
      const double dy = std::max({lo.y - p.y, 0.0, p.y - lo.y - side});
      if (std::hypot(dx, dy) <= reach) {
        ++c.near_singular;
        break;
      }
    }
  }
  return c;
}

}  // namespace ngl::tiling
