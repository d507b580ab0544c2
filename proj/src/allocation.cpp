#include "fsmacwt/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsmacwt/errors.hpp"

namespace fsmacwt {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kNudge = 1e-4;

struct Problem {
  const GaussianFadingChannel& channel;
  const DelayedJointLaw& law;
  BoundKind kind;
  PowerBudget budget;
  PowerWeights w;
  std::vector<std::size_t> cells1;  // indices with positive weight
  std::vector<std::size_t> cells2;
};

// Weighted spend per active cell; the allocation is spend / weight.
struct Point {
  std::vector<double> e1;
  std::vector<double> e2;
};

PowerAllocation to_alloc(const Problem& pb, const Point& pt) {
  PowerAllocation a(pb.law.k);
  for (std::size_t i = 0; i < pb.cells1.size(); ++i) a.p1[pb.cells1[i]] = pt.e1[i] / pb.w.w1[pb.cells1[i]];
  for (std::size_t i = 0; i < pb.cells2.size(); ++i) a.p2[pb.cells2[i]] = pt.e2[i] / pb.w.w2[pb.cells2[i]];
  return a;
}

double norm2(const PowerAllocation& a) {
  double s = 0.0;
  for (double v : a.p1) s += v * v;
  for (double v : a.p2) s += v * v;
  return s;
}

void compositions(int total, std::size_t parts, std::vector<int>& cur, std::vector<std::vector<double>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    std::vector<double> f(parts);
    double denom = 0.0;
    for (int c : cur) denom += c;
    for (std::size_t i = 0; i < parts; ++i) f[i] = denom > 0 ? cur[i] / denom : 0.0;
    out.push_back(std::move(f));
    cur.pop_back();
    return;
  }
  for (int c = total; c >= 0; --c) {
    cur.push_back(c);
    compositions(total - c, parts, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<double>> simplex_grid(int levels, std::size_t parts) {
  std::vector<std::vector<double>> out;
  if (parts == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> cur;
  compositions(levels - 1, parts, cur, out);
  return out;
}

double simplex_count(int levels, std::size_t parts) {
  if (parts <= 1) return 1.0;
  // C(levels - 1 + parts - 1, parts - 1)
  double c = 1.0;
  const double n = levels - 1 + static_cast<double>(parts) - 1;
  for (std::size_t i = 1; i < parts; ++i) c = c * (n - static_cast<double>(parts - 1 - i)) / static_cast<double>(i);
  return c;
}

class CandidateSet {
public:
  CandidateSet(const Problem& pb, const OptimizerOptions& opts) : pb_(pb) {
    int l1 = opts.grid_levels;
    int l2 = opts.grid_levels;
    const double cap = static_cast<double>(opts.max_grid_points);
    while (simplex_count(l1, pb.cells1.size()) * simplex_count(l2, pb.cells2.size()) > cap && (l1 > 2 || l2 > 2)) {
      if (simplex_count(l1, pb.cells1.size()) >= simplex_count(l2, pb.cells2.size()) && l1 > 2)
        --l1;
      else if (l2 > 2)
        --l2;
      else
        --l1;
    }
    f1_ = simplex_grid(l1, pb.cells1.size());
    f2_ = simplex_grid(l2, pb.cells2.size());
    if (is_secrecy_kind(pb.kind)) {
      const int coarse = std::min(opts.grid_levels, 5);
      g1_ = simplex_grid(coarse, pb.cells1.size());
      g2_ = simplex_grid(coarse, pb.cells2.size());
      for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j)
          if (i < 4 || j < 4) alphas_.emplace_back(i / 4.0, j / 4.0);
    }
  }

  std::size_t size() const { return 1 + f1_.size() * f2_.size() + alphas_.size() * g1_.size() * g2_.size(); }

  Point at(std::size_t idx) const {
    Point pt;
    if (idx == 0) {
      for (auto c : pb_.cells1) pt.e1.push_back(pb_.w.w1[c] * pb_.budget.p1);
      for (auto c : pb_.cells2) pt.e2.push_back(pb_.w.w2[c] * pb_.budget.p2);
      return pt;
    }
    idx -= 1;
    const std::size_t boundary = f1_.size() * f2_.size();
    if (idx < boundary) return scaled(f1_[idx / f2_.size()], f2_[idx % f2_.size()], 1.0, 1.0);
    idx -= boundary;
    const std::size_t per_alpha = g1_.size() * g2_.size();
    const auto [a1, a2] = alphas_[idx / per_alpha];
    idx %= per_alpha;
    return scaled(g1_[idx / g2_.size()], g2_[idx % g2_.size()], a1, a2);
  }

private:
  Point scaled(const std::vector<double>& f1, const std::vector<double>& f2, double a1, double a2) const {
    Point pt;
    for (double f : f1) pt.e1.push_back(f * a1 * pb_.budget.p1);
    for (double f : f2) pt.e2.push_back(f * a2 * pb_.budget.p2);
    return pt;
  }

  const Problem& pb_;
  std::vector<std::vector<double>> f1_, f2_, g1_, g2_;
  std::vector<std::pair<double, double>> alphas_;
};

struct Scored {
  Point pt;
  PowerAllocation alloc;
  RegionBounds bounds;
  double value = -std::numeric_limits<double>::infinity();
  double norm = std::numeric_limits<double>::infinity();
};

bool better(double v, double n, const Scored& best, double tol) {
  if (v > best.value + tol) return true;
  if (v < best.value - tol) return false;
  return n < best.norm;
}

Scored score(const Problem& pb, Point pt, const RegionObjective& objective) {
  Scored s;
  s.alloc = to_alloc(pb, pt);
  s.bounds = expected_bounds(pb.channel, pb.law, s.alloc, pb.kind);
  s.value = objective(s.bounds);
  s.norm = norm2(s.alloc);
  s.pt = std::move(pt);
  return s;
}

Scored refine(const Problem& pb, Scored best, const RegionObjective& objective, const OptimizerOptions& opts) {
  const double budgets[2] = {pb.budget.p1, pb.budget.p2};
  const double base = 1.0 / std::max(1, opts.grid_levels - 1);
  double frac = base;
  for (int pass = 0; pass < opts.refine_iters; ++pass) {
    for (int guard = 0; guard < 10000; ++guard) {
      Scored cand_best = best;
      bool improved = false;
      for (int u = 0; u < 2; ++u) {
        const double step = frac * budgets[u];
        if (step <= 0.0) continue;
        const auto& e = u == 0 ? best.pt.e1 : best.pt.e2;
        double spent = 0.0;
        for (double x : e) spent += x;
        const double slack = budgets[u] - spent;
        auto trial = [&](std::size_t i, double di, std::size_t j, double dj) {
          Point p = best.pt;
          auto& v = u == 0 ? p.e1 : p.e2;
          v[i] = std::max(0.0, v[i] + di);
          if (j < v.size()) v[j] = std::max(0.0, v[j] + dj);
          auto s = score(pb, std::move(p), objective);
          if (s.value > best.value + opts.tol && better(s.value, s.norm, cand_best, opts.tol)) {
            cand_best = std::move(s);
            improved = true;
          }
        };
        const std::size_t n = e.size();
        for (std::size_t i = 0; i < n; ++i) {
          if (e[i] > 0.0) {
            const double d = std::min(step, e[i]);
            for (std::size_t j = 0; j < n; ++j)
              if (j != i) trial(i, -d, j, d);
            trial(i, -d, n, 0.0);
          }
          if (slack > 0.0) trial(i, std::min(step, slack), n, 0.0);
        }
      }
      if (!improved) break;
      best = std::move(cand_best);
    }
    frac *= 0.5;
    if (frac < 1e-13) break;
  }
  return best;
}

Problem make_problem(const GaussianFadingChannel& channel, const DelayedJointLaw& law, BoundKind kind,
                     const PowerBudget& budget) {
  if (!(budget.p1 >= 0.0) || !(budget.p2 >= 0.0) || !std::isfinite(budget.p1) || !std::isfinite(budget.p2)) {
    throw DomainError("power budgets must be finite and nonnegative");
  }
  if (channel.states.size() != law.k) throw ShapeError("channel state count does not match the chain");
  Problem pb{channel, law, kind, budget, power_weights(law), {}, {}};
  for (std::size_t i = 0; i < pb.w.w1.size(); ++i)
    if (pb.w.w1[i] > 0.0) pb.cells1.push_back(i);
  for (std::size_t i = 0; i < pb.w.w2.size(); ++i)
    if (pb.w.w2[i] > 0.0) pb.cells2.push_back(i);
  return pb;
}

OptimizationResult finish(const Problem& pb, const Scored& best, double uniform_value) {
  OptimizationResult r;
  r.alloc = best.alloc;
  r.bounds = best.bounds;
  r.value = best.value;
  r.uniform_value = uniform_value;
  const auto f = feasible(best.alloc, pb.budget, pb.law);
  r.p1_binding = f.slack1 <= kFeasTol * std::max(1.0, pb.budget.p1);
  r.p2_binding = f.slack2 <= kFeasTol * std::max(1.0, pb.budget.p2);
  return r;
}

std::vector<Scored> top_candidates(const Problem& pb, const CandidateSet& cs,
                                   const std::vector<RegionBounds>& bounds, const RegionObjective& objective,
                                   double tol) {
  Scored best;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double v = objective(bounds[i]);
    if (v < best.value - tol) continue;
    if (v <= best.value + tol) {
      const double n = norm2(to_alloc(pb, cs.at(i)));
      if (!better(v, n, best, tol)) continue;
      best.norm = n;
    } else {
      best.norm = norm2(to_alloc(pb, cs.at(i)));
    }
    best.value = v;
    best_idx = i;
  }
  return {score(pb, cs.at(best_idx), objective)};
}

std::vector<RegionBounds> evaluate_all(const Problem& pb, const CandidateSet& cs) {
  std::vector<RegionBounds> out(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) out[i] = expected_bounds(pb.channel, pb.law, to_alloc(pb, cs.at(i)), pb.kind);
  return out;
}

}  // namespace

void OptimizerOptions::validate() const {
  if (grid_levels < 2) throw DomainError("grid_levels must be at least 2");
  if (refine_iters < 0) throw DomainError("refine_iters must be nonnegative");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (max_grid_points < 1) throw DomainError("max_grid_points must be positive");
}

PowerWeights power_weights(const DelayedJointLaw& law) {
  const std::size_t k = law.k;
  PowerWeights w{std::vector<double>(k, 0.0), std::vector<double>(k * k, 0.0)};
  for (std::size_t t1 = 0; t1 < k; ++t1)
    for (std::size_t t2 = 0; t2 < k; ++t2)
      for (std::size_t s = 0; s < k; ++s) {
        w.w1[t1] += law.at(t1, t2, s);
        w.w2[t1 * k + t2] += law.at(t1, t2, s);
      }
  return w;
}

Feasibility feasible(const PowerAllocation& alloc, const PowerBudget& budget, const DelayedJointLaw& law) {
  const std::size_t k = law.k;
  if (alloc.k != k || alloc.p1.size() != k || alloc.p2.size() != k * k) {
    throw ShapeError("power allocation does not match the number of states");
  }
  const auto w = power_weights(law);
  bool finite = true;
  double used1 = 0.0, used2 = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    finite = finite && std::isfinite(alloc.p1[i]) && alloc.p1[i] >= 0.0;
    used1 += w.w1[i] * alloc.p1[i];
  }
  for (std::size_t i = 0; i < k * k; ++i) {
    finite = finite && std::isfinite(alloc.p2[i]) && alloc.p2[i] >= 0.0;
    used2 += w.w2[i] * alloc.p2[i];
  }
  Feasibility f;
  f.slack1 = budget.p1 - used1;
  f.slack2 = budget.p2 - used2;
  f.ok = finite && used1 <= budget.p1 + kFeasTol && used2 <= budget.p2 + kFeasTol;
  return f;
}

Feasibility feasible(const PowerAllocation& alloc, const PowerBudget& budget, const MarkovChain& chain,
                     std::int64_t d1, std::int64_t d2) {
  return feasible(alloc, budget, joint_delayed_pmf(chain, d1, d2));
}

PowerAllocation uniform_allocation(const PowerBudget& budget, std::size_t states) {
  PowerAllocation a(states);
  std::fill(a.p1.begin(), a.p1.end(), budget.p1);
  std::fill(a.p2.begin(), a.p2.end(), budget.p2);
  return a;
}

PowerAllocation uniform_allocation(const PowerBudget& budget, const MarkovChain& chain) {
  return uniform_allocation(budget, chain.size());
}

OptimizationResult maximize_objective(const GaussianFadingChannel& channel, const DelayedJointLaw& law,
                                      BoundKind kind, const PowerBudget& budget, const RegionObjective& objective,
                                      const OptimizerOptions& opts) {
  opts.validate();
  const auto pb = make_problem(channel, law, kind, budget);
  const CandidateSet cs(pb, opts);
  const auto bounds = evaluate_all(pb, cs);
  auto best = refine(pb, top_candidates(pb, cs, bounds, objective, opts.tol).front(), objective, opts);
  const auto uniform = score(pb, cs.at(0), objective);
  if (better(uniform.value, uniform.norm, best, opts.tol) && uniform.value >= best.value) best = uniform;
  return finish(pb, best, uniform.value);
}

OptimizationResult maximize_sum_rate(const GaussianFadingChannel& channel, const DelayedJointLaw& law, BoundKind kind,
                                     const PowerBudget& budget, const OptimizerOptions& opts) {
  return maximize_objective(channel, law, kind, budget, [](const RegionBounds& rb) { return rb.c; }, opts);
}

OptimizationResult maximize_sum_rate(const GaussianFadingChannel& channel, const MarkovChain& chain, std::int64_t d1,
                                     std::int64_t d2, BoundKind kind, const PowerBudget& budget,
                                     const OptimizerOptions& opts) {
  return maximize_sum_rate(channel, joint_delayed_pmf(chain, d1, d2), kind, budget, opts);
}

std::vector<SupportingAllocation> frontier_allocations(const GaussianFadingChannel& channel,
                                                       const DelayedJointLaw& law, BoundKind kind,
                                                       const PowerBudget& budget, int weight_count,
                                                       const OptimizerOptions& opts) {
  if (weight_count < 1) throw DomainError("weight_count must be at least 1");
  opts.validate();
  const auto pb = make_problem(channel, law, kind, budget);
  const CandidateSet cs(pb, opts);
  const auto bounds = evaluate_all(pb, cs);
  std::vector<SupportingAllocation> out;
  for (int i = 0; i < weight_count; ++i) {
    const double mu = weight_count == 1 ? 0.5 : static_cast<double>(i) / (weight_count - 1);
    RegionObjective objective;
    if (weight_count == 1) {
      objective = [](const RegionBounds& rb) { return rb.c; };
    } else {
      objective = [mu](const RegionBounds& rb) { return support_value(rb, mu + kNudge, 1.0 - mu + kNudge); };
    }
    auto best = refine(pb, top_candidates(pb, cs, bounds, objective, opts.tol).front(), objective, opts);
    out.push_back({mu, best.alloc, best.bounds});
  }
  return out;
}

std::vector<SupportingAllocation> frontier_allocations(const GaussianFadingChannel& channel, const MarkovChain& chain,
                                                       std::int64_t d1, std::int64_t d2, BoundKind kind,
                                                       const PowerBudget& budget, int weight_count,
                                                       const OptimizerOptions& opts) {
  return frontier_allocations(channel, joint_delayed_pmf(chain, d1, d2), kind, budget, weight_count, opts);
}

}  // namespace fsmacwt
