#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fsmacwt/channel_models.hpp"
#include "fsmacwt/discrete_bounds.hpp"
#include "fsmacwt/markov_state.hpp"

namespace fsmacwt {

/**
 * Generator used by every sampler: std::mt19937_64 seeded with the 64-bit
 * seed, uniforms built from the top 53 bits of each draw, categorical draws by
 * inverse CDF over the probability vector in index order.
 */
class Rng {
public:
  static constexpr const char* kAlgorithm = "mt19937_64/top53/inverse-cdf";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t categorical(std::span<const double> probs);

private:
  std::mt19937_64 engine_;
};

/// S_1 ~ pi, then S_i drawn from column S_{i-1} of the transition matrix.
std::vector<std::uint16_t> sample_state_path(const MarkovChain& chain, std::size_t n, std::uint64_t seed);

/// Normalized counts of (S_{i-d1}, S_{i-d2}, S_i) along one sampled path of length n.
DelayedJointLaw empirical_delayed_joint(const MarkovChain& chain, std::int64_t d1, std::int64_t d2, std::size_t n,
                                        std::uint64_t seed);

/// Record layout (s~1, s~2, s, q, x1, x2, y, z).
using SampleRecord = std::array<std::uint16_t, 8>;

struct SimulationRun {
  std::uint64_t seed = 0;
  std::size_t length = 0;
  std::size_t k = 1;
  std::size_t nq = 1;
  DiscreteAlphabets sizes;
  std::vector<SampleRecord> records;
};

/// Independent draws: delayed-state triple from its law, then q, x1, x2 and (y, z) in sequence.
SimulationRun simulate_discrete(const DiscreteChannelSpec& spec, const InputPolicy& policy, const MarkovChain& chain,
                                std::int64_t d1, std::int64_t d2, std::size_t n, std::uint64_t seed);

/// Plug-in joint of a run, laid out like assemble_joint().
FullJoint empirical_joint(const SimulationRun& run);

struct EmpiricalTerms {
  InfoTerms terms;
  std::vector<std::string> warnings;
};

/// Plug-in estimates; warns when the run has fewer than 10 samples per joint cell.
EmpiricalTerms empirical_info_terms(const SimulationRun& run);

}  // namespace fsmacwt
