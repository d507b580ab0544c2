#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fsmacwt/channel_models.hpp"
#include "fsmacwt/gaussian_bounds.hpp"
#include "fsmacwt/markov_state.hpp"
#include "fsmacwt/power.hpp"
#include "fsmacwt/region_geometry.hpp"

namespace fsmacwt {

struct OptimizerOptions {
  int grid_levels = 21;  // points per axis on each budget simplex
  int refine_iters = 200;  // step-halving passes of the coordinate ascent
  double tol = 1e-12;  // bits
  std::uint64_t seed = 0;  // carried for configs; the Gaussian search is deterministic
  std::size_t max_grid_points = 2'000'000;

  void validate() const;
};

struct Feasibility {
  bool ok = false;
  double slack1 = 0.0;  // P1 minus the average power spent by user 1
  double slack2 = 0.0;
};

/// Averaging weights: w1[t1] = pi(t1), w2[t1 * k + t2] = pi(t1) K^{d1-d2}(t2, t1).
struct PowerWeights {
  std::vector<double> w1;
  std::vector<double> w2;
};

PowerWeights power_weights(const DelayedJointLaw& law);

Feasibility feasible(const PowerAllocation& alloc, const PowerBudget& budget, const DelayedJointLaw& law);
Feasibility feasible(const PowerAllocation& alloc, const PowerBudget& budget, const MarkovChain& chain,
                     std::int64_t d1, std::int64_t d2);

PowerAllocation uniform_allocation(const PowerBudget& budget, std::size_t states);
PowerAllocation uniform_allocation(const PowerBudget& budget, const MarkovChain& chain);

struct OptimizationResult {
  PowerAllocation alloc;
  RegionBounds bounds;
  double value = 0.0;  // objective at `alloc` (sum cap for maximize_sum_rate)
  double uniform_value = 0.0;
  bool p1_binding = false;
  bool p2_binding = false;
};

/// Scalar objective over a clamped pentagon.
using RegionObjective = std::function<double(const RegionBounds&)>;

/**
 * Maximizes `objective` over feasible allocations: a simplex grid on the
 * budget boundary (plus scaled-down interior points for secrecy kinds),
 * followed by pairwise-transfer and single-cell coordinate ascent with a
 * halving step. The uniform allocation is always a candidate.
 */
OptimizationResult maximize_objective(const GaussianFadingChannel& channel, const DelayedJointLaw& law,
                                      BoundKind kind, const PowerBudget& budget, const RegionObjective& objective,
                                      const OptimizerOptions& opts);

OptimizationResult maximize_sum_rate(const GaussianFadingChannel& channel, const DelayedJointLaw& law, BoundKind kind,
                                     const PowerBudget& budget, const OptimizerOptions& opts = {});
OptimizationResult maximize_sum_rate(const GaussianFadingChannel& channel, const MarkovChain& chain, std::int64_t d1,
                                     std::int64_t d2, BoundKind kind, const PowerBudget& budget,
                                     const OptimizerOptions& opts = {});

struct SupportingAllocation {
  double mu = 0.0;  // weight on R1; 1 - mu on R2
  PowerAllocation alloc;
  RegionBounds bounds;
};

/**
 * One supporting allocation per weight mu on a uniform grid over [0, 1]; the
 * objective is the pentagon's support value in direction (mu, 1 - mu), nudged
 * slightly toward (1, 1) so ties resolve to the larger corner. weight_count = 1
 * yields the single sum-rate optimum.
 */
std::vector<SupportingAllocation> frontier_allocations(const GaussianFadingChannel& channel,
                                                       const DelayedJointLaw& law, BoundKind kind,
                                                       const PowerBudget& budget, int weight_count,
                                                       const OptimizerOptions& opts = {});
std::vector<SupportingAllocation> frontier_allocations(const GaussianFadingChannel& channel, const MarkovChain& chain,
                                                       std::int64_t d1, std::int64_t d2, BoundKind kind,
                                                       const PowerBudget& budget, int weight_count,
                                                       const OptimizerOptions& opts = {});

}  // namespace fsmacwt
