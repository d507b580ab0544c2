#pragma once

#include <cstddef>
#include <vector>

namespace fsmacwt {

/// Average power constraints P1 and P2 (power units).
struct PowerBudget {
  double p1 = 0.0;
  double p2 = 0.0;
};

/**
 * Power maps over the delayed states: p1[t1] = P1(s~1) and
 * p2[t1 * k + t2] = P2(s~1, s~2).
 */
struct PowerAllocation {
  std::size_t k = 0;
  std::vector<double> p1;
  std::vector<double> p2;

  PowerAllocation() = default;
  explicit PowerAllocation(std::size_t states) : k(states), p1(states, 0.0), p2(states * states, 0.0) {}

  double power1(std::size_t t1) const { return p1[t1]; }
  double power2(std::size_t t1, std::size_t t2) const { return p2[t1 * k + t2]; }
  double& power2(std::size_t t1, std::size_t t2) { return p2[t1 * k + t2]; }

  bool operator==(const PowerAllocation&) const = default;
};

}  // namespace fsmacwt
