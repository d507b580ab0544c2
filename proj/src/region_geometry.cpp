#include "fsmacwt/region_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fsmacwt/csv.hpp"
#include "fsmacwt/errors.hpp"

namespace fsmacwt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b) {
  return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

void push_distinct(std::vector<RatePoint>& v, RatePoint p) {
  if (v.empty() || v.back() != p) v.push_back(p);
}

double union_radius(std::span<const RegionBounds> regions, double theta) {
  double r = 0.0;
  for (const auto& rb : regions) r = std::max(r, radial_extent(rb, theta));
  return r;
}

// Point where the ray at theta leaves the union, placed exactly on the binding edge.
RatePoint boundary_point(std::span<const RegionBounds> regions, double theta) {
  const double x = theta >= std::numbers::pi / 2 ? 0.0 : std::cos(theta);
  const double y = theta <= 0.0 ? 0.0 : std::sin(theta);
  RatePoint best{0.0, 0.0};
  double reach = -1.0;
  for (const auto& rb : regions) {
    const double a = std::max(rb.a, 0.0), b = std::max(rb.b, 0.0), c = std::max(rb.c, 0.0);
    const double ta = x > 0.0 ? a / x : kInf;
    const double tb = y > 0.0 ? b / y : kInf;
    const double tc = c / (x + y);
    const double t = std::min({ta, tb, tc});
    if (t <= reach) continue;
    reach = t;
    if (t == ta) {
      best = {a, y > 0.0 ? t * y : 0.0};
    } else if (t == tb) {
      best = {x > 0.0 ? t * x : 0.0, b};
    } else {
      const double r1 = x > 0.0 ? std::min(t * x, c) : 0.0;
      best = {r1, y > 0.0 ? c - r1 : 0.0};
    }
  }
  return best;
}

}  // namespace

double Frontier::height(double r1) const {
  if (points.empty() || r1 > max_r1()) return 0.0;
  if (r1 <= points.front().r1) return points.front().r2;
  const auto it = std::lower_bound(points.begin(), points.end(), r1,
                                   [](const RatePoint& p, double x) { return p.r1 < x; });
  if (it->r1 == r1) return it->r2;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (r1 - lo.r1) / (hi.r1 - lo.r1);
  return lo.r2 + t * (hi.r2 - lo.r2);
}

RegionBounds tighten(const RegionBounds& rb) {
  const double a = std::max(rb.a, 0.0);
  const double b = std::max(rb.b, 0.0);
  const double c = std::max(rb.c, 0.0);
  return {std::min(a, c), std::min(b, c), std::min(c, a + b)};
}

std::vector<RatePoint> pentagon_vertices(const RegionBounds& rb) {
  const double a = std::max(rb.a, 0.0);
  const double b = std::max(rb.b, 0.0);
  const double c = std::max(rb.c, 0.0);
  std::vector<RatePoint> v;
  v.push_back({0.0, 0.0});
  if (c >= a + b) {
    push_distinct(v, {a, 0.0});
    push_distinct(v, {a, b});
    push_distinct(v, {0.0, b});
  } else if (c <= std::min(a, b)) {
    push_distinct(v, {c, 0.0});
    push_distinct(v, {0.0, c});
  } else {
    const double ax = std::min(a, c);
    const double by = std::min(b, c);
    push_distinct(v, {ax, 0.0});
    push_distinct(v, {ax, c - ax});
    push_distinct(v, {c - by, by});
    push_distinct(v, {0.0, by});
  }
  while (v.size() > 1 && v.back() == v.front()) v.pop_back();
  return v;
}

double support_value(const RegionBounds& rb, double w1, double w2) {
  const auto p = support_corner(rb, w1, w2);
  return w1 * p.r1 + w2 * p.r2;
}

RatePoint support_corner(const RegionBounds& rb, double w1, double w2) {
  RatePoint best{0.0, 0.0};
  double best_val = -kInf;
  for (const auto& p : pentagon_vertices(rb)) {
    const double val = w1 * p.r1 + w2 * p.r2;
    // Ties go to the corner with the larger rate sum.
    if (val > best_val || (val == best_val && p.r1 + p.r2 > best.r1 + best.r2)) {
      best_val = val;
      best = p;
    }
  }
  return best;
}

double radial_extent(const RegionBounds& rb, double theta) {
  const double x = theta >= std::numbers::pi / 2 ? 0.0 : std::cos(theta);
  const double y = theta <= 0.0 ? 0.0 : std::sin(theta);
  double t = kInf;
  if (x > 0.0) t = std::min(t, std::max(rb.a, 0.0) / x);
  if (y > 0.0) t = std::min(t, std::max(rb.b, 0.0) / y);
  t = std::min(t, std::max(rb.c, 0.0) / (x + y));
  return t;
}

bool contains(const RegionBounds& rb, RatePoint p, double tol) {
  return p.r1 >= -tol && p.r2 >= -tol && p.r1 <= rb.a + tol && p.r2 <= rb.b + tol && p.r1 + p.r2 <= rb.c + tol;
}

Frontier union_frontier(std::span<const RegionBounds> regions, int angle_samples) {
  if (regions.empty()) throw DomainError("union_frontier needs at least one region");
  if (angle_samples < 2) throw DomainError("angle_samples must be at least 2");

  struct Sample {
    double theta;
    RatePoint p;
  };
  std::vector<Sample> samples;
  const double half_pi = std::numbers::pi / 2;
  for (int i = 0; i < angle_samples; ++i) {
    const double theta = half_pi * (1.0 - static_cast<double>(i) / (angle_samples - 1));
    samples.push_back({theta, boundary_point(regions, theta)});
  }
  auto add_if_on_boundary = [&](RatePoint v) {
    if (!(v.r1 >= 0.0 && v.r2 >= 0.0) || (v.r1 == 0.0 && v.r2 == 0.0)) return;
    const double theta = std::atan2(v.r2, v.r1);
    const double reach = union_radius(regions, theta);
    const double r = std::hypot(v.r1, v.r2);
    if (r >= reach * (1.0 - 1e-12) && r <= reach * (1.0 + 1e-12)) samples.push_back({theta, v});
  };
  for (const auto& rb : regions) {
    for (const auto& v : pentagon_vertices(rb)) add_if_on_boundary(v);
  }
  // Reflex corners of the union sit where edges of two different pentagons cross.
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto p = tighten(regions[i]);
    for (std::size_t j = 0; j < regions.size(); ++j) {
      if (i == j) continue;
      const auto q = tighten(regions[j]);
      add_if_on_boundary({q.a, p.b});
      add_if_on_boundary({q.c - p.b, p.b});
      add_if_on_boundary({p.a, q.c - p.a});
    }
  }
  std::stable_sort(samples.begin(), samples.end(), [](const Sample& x, const Sample& y) {
    if (x.theta != y.theta) return x.theta > y.theta;
    return x.p.r1 < y.p.r1;
  });

  // Weak Pareto filter: drop points strictly dominated in both coordinates.
  const double eps = 1e-12;
  std::vector<RatePoint> kept;
  for (const auto& s : samples) {
    bool dominated = false;
    for (const auto& o : samples) {
      if (o.p.r1 > s.p.r1 + eps && o.p.r2 > s.p.r2 + eps) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(s.p);
  }
  // Angle order traces the boundary; clamp away rounding noise so R1 never
  // decreases and R2 never increases along it.
  Frontier f;
  for (auto p : kept) {
    if (!f.points.empty()) {
      const auto& last = f.points.back();
      p.r1 = std::max(p.r1, last.r1);
      p.r2 = std::min(p.r2, last.r2);
      if (std::abs(last.r1 - p.r1) <= eps && std::abs(last.r2 - p.r2) <= eps) continue;
    }
    f.points.push_back(p);
  }
  return f;
}

Frontier convex_hull_frontier(const Frontier& f) {
  if (f.points.size() <= 2) return f;
  std::vector<RatePoint> pts = f.points;
  std::stable_sort(pts.begin(), pts.end(), [](const RatePoint& x, const RatePoint& y) {
    if (x.r1 != y.r1) return x.r1 < y.r1;
    return x.r2 > y.r2;
  });
  std::vector<RatePoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) hull.pop_back();
    if (hull.empty() || hull.back() != p) hull.push_back(p);
  }
  return {std::move(hull)};
}

bool dominates(const Frontier& a, const Frontier& b, double tol) {
  for (const auto& p : b.points) {
    if (p.r1 > a.max_r1() + tol) return false;
    if (p.r2 > a.height(std::max(0.0, p.r1 - tol)) + tol) return false;
  }
  return true;
}

double frontier_area(const Frontier& f) {
  double area = 0.0;
  for (std::size_t i = 1; i < f.points.size(); ++i) {
    const auto& p = f.points[i - 1];
    const auto& q = f.points[i];
    area += 0.5 * (q.r1 - p.r1) * (p.r2 + q.r2);
  }
  return area;
}

double polygon_area(std::span<const RatePoint> vertices) {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& p = vertices[i];
    const auto& q = vertices[(i + 1) % vertices.size()];
    twice += p.r1 * q.r2 - q.r1 * p.r2;
  }
  return 0.5 * std::abs(twice);
}

std::string frontier_csv(const Frontier& f) {
  std::string out;
  for (const auto& p : f.points) {
    out += format_number(p.r1);
    out += ',';
    out += format_number(p.r2);
    out += '\n';
  }
  return out;
}

}  // namespace fsmacwt
