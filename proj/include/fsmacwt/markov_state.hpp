#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fsmacwt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/**
 * Finite-state, time-homogeneous Markov chain for the channel state.
 *
 * The transition matrix is column-stochastic: transition()(l, j) is the
 * probability of moving to state l from state j. This is the K(s_l, s_j)
 * convention used for the d-step matrices throughout the library.
 *
 * Construction validates stochasticity, irreducibility and aperiodicity;
 * a constructed chain is immutable.
 */
class MarkovChain {
public:
  MarkovChain(std::vector<std::string> labels, Matrix transition);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Matrix& transition() const noexcept { return transition_; }

  /// Pr{next = to | current = from}.
  double prob(std::size_t to, std::size_t from) const { return transition_(to, from); }

  std::optional<std::size_t> index_of(std::string_view label) const;

private:
  std::vector<std::string> labels_;
  Matrix transition_;
};

struct SteadyDistribution {
  Vector pi;
};

/**
 * Law of (S~1, S~2, S) = (S_{i-d1}, S_{i-d2}, S_i) for d1 >= d2, stored as
 * a dense k*k*k array with S~1 the slowest index.
 */
struct DelayedJointLaw {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  std::size_t k = 0;
  std::vector<double> pmf;

  double at(std::size_t t1, std::size_t t2, std::size_t s) const { return pmf[(t1 * k + t2) * k + s]; }
  double& at(std::size_t t1, std::size_t t2, std::size_t s) { return pmf[(t1 * k + t2) * k + s]; }
};

/// Two-state Good/Bad parameters. g is B->G, b is G->B.
struct GilbertElliottParams {
  double g = 0.0;
  double b = 0.0;
  double u = 0.0;  // memory, 1 - g - b
  double c = 0.0;  // asymmetry, g / b

  static GilbertElliottParams from_transitions(double g, double b);
  /// Inverse map of (u, c) back to (g, b); throws DomainError if the result leaves (0,1).
  static GilbertElliottParams from_memory(double u, double c);
};

/// Two-state chain in (G, B) order with columns G: (1-b, b) and B: (g, 1-g).
MarkovChain build_gilbert_elliott(double g, double b);

SteadyDistribution steady_state(const MarkovChain& chain);

/// K^d by repeated squaring; K^0 is the identity.
Matrix d_step_matrix(const MarkovChain& chain, std::int64_t d);

/// pmf(t1, t2, s) = pi(t1) K^{d1-d2}(t2, t1) K^{d2}(s, t2). Requires d1 >= d2 >= 0.
DelayedJointLaw joint_delayed_pmf(const MarkovChain& chain, std::int64_t d1, std::int64_t d2);

/// Limit of joint_delayed_pmf as every positive exponent goes to infinity:
/// K^m is replaced by the rank-one matrix pi 1^T whenever m > 0.
DelayedJointLaw asymptotic_delayed_pmf(const MarkovChain& chain, std::int64_t d1, std::int64_t d2);

GilbertElliottParams memory_params(const MarkovChain& chain);

}  // namespace fsmacwt
