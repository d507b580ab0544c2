#pragma once

#include <span>
#include <string>
#include <vector>

namespace fsmacwt {

/// Caps defining {R1, R2 >= 0, R1 <= a, R2 <= b, R1 + R2 <= c}, in bits.
struct RegionBounds {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  bool operator==(const RegionBounds&) const = default;
};

struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;

  bool operator==(const RatePoint&) const = default;
};

/**
 * Upper-right boundary of a down-closed rate region, ordered by increasing R1
 * with R2 nonincreasing. It starts on the R2 axis and ends on the R1 axis; the
 * region is everything below the piecewise-linear curve through the points.
 */
struct Frontier {
  std::vector<RatePoint> points;

  double max_r1() const { return points.empty() ? 0.0 : points.back().r1; }
  double max_r2() const { return points.empty() ? 0.0 : points.front().r2; }
  /// Height of the boundary at abscissa r1 (0 beyond max_r1()).
  double height(double r1) const;
};

inline constexpr int kDefaultAngleSamples = 181;

/// Same region with redundant caps lowered: (min(a, c), min(b, c), min(c, a + b)).
RegionBounds tighten(const RegionBounds& rb);

/// Counterclockwise vertices starting at the origin. Degenerate edges are dropped.
std::vector<RatePoint> pentagon_vertices(const RegionBounds& rb);

/// max over the pentagon of w1 R1 + w2 R2 (w1, w2 >= 0) and a maximizing corner.
double support_value(const RegionBounds& rb, double w1, double w2);
RatePoint support_corner(const RegionBounds& rb, double w1, double w2);

/// Farthest distance from the origin along direction (cos theta, sin theta) inside the pentagon.
double radial_extent(const RegionBounds& rb, double theta);

bool contains(const RegionBounds& rb, RatePoint p, double tol = 0.0);

/**
 * Boundary of the union of pentagons: one radial sample per direction on a
 * uniform grid over [0, pi/2], merged with every pentagon vertex lying on the
 * union boundary, then filtered to the weakly Pareto-optimal points.
 */
Frontier union_frontier(std::span<const RegionBounds> regions, int angle_samples = kDefaultAngleSamples);

/// Least concave majorant of the frontier (the time-sharing region).
Frontier convex_hull_frontier(const Frontier& f);

/// True iff every point of `b` lies under `a` once `a` is expanded by `tol` in both coordinates.
bool dominates(const Frontier& a, const Frontier& b, double tol);

/// Area of the region under the frontier.
double frontier_area(const Frontier& f);

double polygon_area(std::span<const RatePoint> vertices);

/// "R1,R2" rows, 12 significant digits, increasing R1.
std::string frontier_csv(const Frontier& f);

}  // namespace fsmacwt
