#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fsmacwt/markov_state.hpp"

namespace fsmacwt {

/// Per-state parameters of Y = h1 X1 + h2 X2 + N_s, Z = h3 Y + N_w.
struct FadingState {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double sigma_s2 = 1.0;  // legitimate-receiver noise variance
};

/// Degraded Gaussian fading channel. The eavesdropper noise variance is
/// state-independent; the eavesdropper always observes a scaled noisy copy of Y.
struct GaussianFadingChannel {
  std::vector<std::string> labels;  // optional; when non-empty must match the chain
  std::vector<FadingState> states;
  double sigma_w2 = 1.0;
};

/// Every invariant violation of `channel` against `chain`; empty means valid.
std::vector<std::string> gaussian_violations(const GaussianFadingChannel& channel, const MarkovChain& chain);

/// Returns `channel` unchanged or throws ValidationError listing all violations.
const GaussianFadingChannel& validate_gaussian(const GaussianFadingChannel& channel, const MarkovChain& chain);

struct DiscreteAlphabets {
  std::size_t states = 1;
  std::size_t x1 = 1;
  std::size_t x2 = 1;
  std::size_t y = 1;
  std::size_t z = 1;

  bool operator==(const DiscreteAlphabets&) const = default;
};

/**
 * Finite-alphabet state-dependent wiretap MAC, P(y, z | x1, x2, s).
 *
 * The kernel is dense with index order (s, x1, x2, y, z), z fastest.
 * When `degraded` is set and the spec has passed validate_discrete(),
 * `z_given_y` holds the recovered P(z | y) as a y-major |Y| x |Z| array.
 */
struct DiscreteChannelSpec {
  DiscreteAlphabets sizes;
  std::vector<double> kernel;
  bool degraded = false;
  std::vector<double> z_given_y;

  std::size_t index(std::size_t s, std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) const {
    return (((s * sizes.x1 + x1) * sizes.x2 + x2) * sizes.y + y) * sizes.z + z;
  }
  double operator()(std::size_t s, std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) const {
    return kernel[index(s, x1, x2, y, z)];
  }
  double& operator()(std::size_t s, std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) {
    return kernel[index(s, x1, x2, y, z)];
  }

  static DiscreteChannelSpec zeros(const DiscreteAlphabets& sizes);
};

/// Maximum |P(y,z|.) - P(y|.) P(z|y)| for the least-squares P(z|y) stored in `z_given_y`.
double degradedness_residual(const DiscreteChannelSpec& spec, const std::vector<double>& z_given_y);

/// Least-squares fit of P(z | y) from the kernel, separable per (y, z).
std::vector<double> fit_z_given_y(const DiscreteChannelSpec& spec);

/**
 * Checks normalization of every (s, x1, x2) slice and, for specs flagged as
 * degraded, that a consistent P(z | y) exists. Returns a copy with
 * `z_given_y` filled in for degraded specs; throws ValidationError otherwise.
 */
DiscreteChannelSpec validate_discrete(const DiscreteChannelSpec& spec);

/// The kernel P(y | x1, x2, s) P(z | y) rebuilt from a validated degraded spec.
DiscreteChannelSpec degraded_factorization(const DiscreteChannelSpec& spec);

/// Swaps the roles of X1 and X2 in the kernel.
DiscreteChannelSpec swap_inputs(const DiscreteChannelSpec& spec);

/**
 * Binary MAC with Y = X1 xor X2 xor N, N ~ Bern(crossover[s]), and an
 * eavesdropper seeing Y through a BSC(eve_crossover). Always degraded.
 */
DiscreteChannelSpec xor_bsc_channel(const std::vector<double>& crossover, double eve_crossover);

}  // namespace fsmacwt
