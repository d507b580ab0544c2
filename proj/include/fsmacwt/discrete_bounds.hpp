#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fsmacwt/channel_models.hpp"
#include "fsmacwt/markov_state.hpp"
#include "fsmacwt/region_geometry.hpp"

namespace fsmacwt {

inline constexpr std::size_t kMaxJointCells = 1'000'000;
inline constexpr std::size_t kInnerSMaxQ = 6;
inline constexpr std::size_t kInnerSfMaxQ = 2;

/**
 * Time-sharing and input conditionals:
 *   q_given[t1 * nq + q]                     = P(q | s~1)
 *   x1_given[(t1 * nq + q) * nx1 + x1]       = P(x1 | s~1, q)
 *   x2_given[((t1 * k + t2) * nq + q) * nx2 + x2] = P(x2 | s~1, s~2, q)
 */
struct InputPolicy {
  std::size_t k = 1;
  std::size_t nq = 1;
  std::size_t nx1 = 1;
  std::size_t nx2 = 1;
  std::vector<double> q_given;
  std::vector<double> x1_given;
  std::vector<double> x2_given;

  double q(std::size_t t1, std::size_t qq) const { return q_given[t1 * nq + qq]; }
  double x1(std::size_t t1, std::size_t qq, std::size_t a) const { return x1_given[(t1 * nq + qq) * nx1 + a]; }
  double x2(std::size_t t1, std::size_t t2, std::size_t qq, std::size_t b) const {
    return x2_given[((t1 * k + t2) * nq + qq) * nx2 + b];
  }

  static InputPolicy uniform(std::size_t k, std::size_t nq, std::size_t nx1, std::size_t nx2);
  /// Throws ValidationError unless every conditional row is a probability vector (1e-12).
  void validate() const;
  bool operator==(const InputPolicy&) const = default;
};

/// Dense joint over (q, s~1, s~2, s, x1, x2, y, z), z fastest.
struct FullJoint {
  // q, s~1, s~2, s, x1, x2, y, z
  std::size_t dims[8] = {1, 1, 1, 1, 1, 1, 1, 1};
  std::vector<double> p;

  std::size_t cells() const;
};

enum JointVar : unsigned { kQ = 1u << 0, kT1 = 1u << 1, kT2 = 1u << 2, kS = 1u << 3,
                           kX1 = 1u << 4, kX2 = 1u << 5, kY = 1u << 6, kZ = 1u << 7 };
inline constexpr unsigned kStates = kT1 | kT2 | kS;

FullJoint assemble_joint(const DiscreteChannelSpec& spec, const InputPolicy& policy, const DelayedJointLaw& law);

/// Entropy in bits of the marginal over the variables in `mask` (0 log 0 = 0).
double marginal_entropy(const FullJoint& j, unsigned mask);

/**
 * Information terms in bits. "S" abbreviates the conditioning on (S, S~1, S~2).
 */
struct InfoTerms {
  double i_x1_y_x2q = 0.0;  // I(X1;Y|X2,S,Q)
  double i_x2_y_x1q = 0.0;  // I(X2;Y|X1,S,Q)
  double i_x12_y_q = 0.0;   // I(X1,X2;Y|S,Q)
  double i_x1_y_q = 0.0;    // I(X1;Y|S,Q)
  double i_x1_z_q = 0.0;    // I(X1;Z|S,Q)
  double i_x2_z_q = 0.0;    // I(X2;Z|S,Q)
  double i_x12_z_q = 0.0;   // I(X1,X2;Z|S,Q)
  double i_x12_y = 0.0;     // I(X1,X2;Y|S)
  double i_x12_z = 0.0;     // I(X1,X2;Z|S)
  double h_y_zx12 = 0.0;    // H(Y|Z,X1,X2,S)
  double h_y_z = 0.0;       // H(Y|Z,S)
  double h_y = 0.0;         // H(Y|S)

  /// (name, value) pairs in declaration order.
  std::vector<std::pair<std::string, double>> named() const;
};

InfoTerms info_terms(const FullJoint& j);

enum class DiscreteBound { InnerS, InnerSf, DegradedOuterS, RelaxedOuterSf };

std::string to_string(DiscreteBound b);
DiscreteBound parse_discrete_bound(const std::string& name);

/// Caps for one bound family from precomputed terms, clamped at 0.
RegionBounds bounds_from_terms(const InfoTerms& t, DiscreteBound which);

RegionBounds inner_region_s(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, const InputPolicy& policy);
RegionBounds inner_region_sf(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, const InputPolicy& policy);
RegionBounds degraded_outer_s(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, const InputPolicy& policy);
RegionBounds relaxed_outer_sf(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, const InputPolicy& policy);
RegionBounds evaluate_bound(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, const InputPolicy& policy,
                            DiscreteBound which);

RegionBounds inner_region_s(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                            std::int64_t d2, const InputPolicy& policy);
RegionBounds inner_region_sf(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                             std::int64_t d2, const InputPolicy& policy);
RegionBounds degraded_outer_s(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                              std::int64_t d2, const InputPolicy& policy);
RegionBounds relaxed_outer_sf(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                              std::int64_t d2, const InputPolicy& policy);

struct PolicySearchOptions {
  std::size_t q_size = 1;
  int starts = 8;  // start 0 is the uniform policy, the rest are Dirichlet(1) draws
  int refine_iters = 40;  // step-halving passes
  std::uint64_t seed = 0;
  double mu = -1.0;  // < 0: maximize the sum cap; otherwise support value in direction (mu, 1 - mu)
};

struct PolicySearchResult {
  InputPolicy policy;
  RegionBounds bounds;
  double value = 0.0;
};

/// Throws GuardError when the dense joint would exceed kMaxJointCells.
PolicySearchResult optimize_policy(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, DiscreteBound which,
                                   const PolicySearchOptions& opts);
PolicySearchResult optimize_policy(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                                   std::int64_t d2, DiscreteBound which, const PolicySearchOptions& opts);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fsmacwt
