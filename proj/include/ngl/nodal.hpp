#pragma once

#include <vector>

#include "ngl/common.hpp"
#include "ngl/grid_field.hpp"
#include "ngl/surface.hpp"

namespace ngl::nodal {

struct Segment {
  Point a, b;
};

// Zero set of a sampled field as straight segments, one or two per grid cell.
// Coordinates are unwrapped: torus segments lie in [0, 1]^2 with cells on the
// last row/column reaching 1.0.
struct NodalSet {
  std::vector<Segment> segments;
  std::vector<Point> singular_points;
  bool periodic = false;
  double euclidean_length = 0.0;
};

/// Marching squares. Edge zeros by linear interpolation, saddle cells resolved
/// by the sign of the cell-centre average, exact zeros count as positive.
/// Masked planar fields only use cells whose four corners are in the mask.
/// Segments come out ordered by cell index (row-major), so the result does
/// not depend on the thread count.
NodalSet extract_nodal_set(const GridField& f);

struct Lengths {
  double euclidean = 0.0;
  double metric = 0.0;  // equals euclidean when no metric is given
};

Lengths nodal_length(const NodalSet& set, const surface::ConformalMetric* metric = nullptr);

/// Points where f and grad f both (nearly) vanish. Per cell the zero of the
/// bilinearly interpolated central-difference gradient is located; the cell is
/// flagged when |grad f| there is below tol_g max|grad f| and the quadratic
/// Taylor estimate of |f| is below tol_f max|f|. Adjacent flagged cells merge
/// into one point (their centroid).
std::vector<Point> singular_points(const GridField& f, double tol_f = 1e-3, double tol_g = 1e-2);

// Crossings of one segment with a circle: parameters t in [0, 1), a tangency
// counts once.
int segment_circle_crossings(const Segment& seg, Point center, double radius);
double segment_length_in_disk(const Segment& seg, Point center, double radius);

/// Number of crossings of the set with the circle |z - center| = radius.
/// Torus sets are matched against the nearest period image of each segment.
int circle_intersections(const NodalSet& set, Point center, double radius);

/// Length of the part of the segments inside the half-open square
/// [x, x + side) x [y, y + side).
double clipped_length_in_square(const std::vector<Segment>& segments, Point corner, double side);

/// Length of the part of the segments inside the closed disk.
double clipped_length_in_disk(const std::vector<Segment>& segments, Point center, double radius);

}  // namespace ngl::nodal
