#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsmacwt/allocation.hpp"
#include "fsmacwt/channel_models.hpp"
#include "fsmacwt/discrete_bounds.hpp"
#include "fsmacwt/gaussian_bounds.hpp"
#include "fsmacwt/markov_state.hpp"
#include "fsmacwt/region_geometry.hpp"

namespace fsmacwt {

enum class ChainModel { GilbertElliott, Memory, Matrix };

struct ChainConfig {
  ChainModel model = ChainModel::GilbertElliott;
  double g = 0.05;
  double b = 0.05;
  double u = 0.9;
  double c = 1.0;
  std::vector<std::vector<double>> columns;  // columns[j][l] = Pr{to l | from j}

  // Compares only the parameters of the selected model.
  bool operator==(const ChainConfig& o) const {
    if (model != o.model) return false;
    switch (model) {
      case ChainModel::GilbertElliott:
        return g == o.g && b == o.b;
      case ChainModel::Memory:
        return u == o.u && c == o.c;
      case ChainModel::Matrix:
        return columns == o.columns;
    }
    return false;
  }
};

enum class SweepMode { Equal, D2Zero };

struct SweepConfig {
  std::vector<std::int64_t> delays = {0, 1, 2, 5, 10, 20, 50, 100};
  SweepMode mode = SweepMode::Equal;
  std::vector<BoundKind> kinds = {BoundKind::SfIn};
  bool optimized = true;  // false: uniform allocation

  bool operator==(const SweepConfig&) const = default;
};

struct RegionConfig {
  std::vector<BoundKind> kinds = {BoundKind::SIn, BoundKind::SOut, BoundKind::SfIn, BoundKind::SfOut,
                                  BoundKind::CapNoEve};
  int weight_count = 11;
  int angle_samples = kDefaultAngleSamples;
  bool hull = true;
  bool pool = true;  // evaluate every kind over the allocations found for all kinds

  bool operator==(const RegionConfig&) const = default;
};

enum class DiscreteModel { XorBsc, Explicit };

struct DiscreteConfig {
  DiscreteModel model = DiscreteModel::XorBsc;
  std::vector<double> crossover = {0.1, 0.3};
  double eve_crossover = 0.2;
  std::size_t x1_size = 2;
  std::size_t x2_size = 2;
  std::size_t y_size = 2;
  std::size_t z_size = 2;
  std::vector<double> kernel;
  bool degraded = false;
  std::vector<DiscreteBound> bounds = {DiscreteBound::InnerS, DiscreteBound::InnerSf, DiscreteBound::DegradedOuterS,
                                       DiscreteBound::RelaxedOuterSf};
  std::size_t q_size = 1;
  int starts = 8;
  int refine_iters = 40;
  bool optimize = true;  // false: evaluate the [policy] section as given

  bool operator==(const DiscreteConfig&) const = default;
};

struct PolicyConfig {
  bool present = false;
  std::size_t q_size = 1;
  std::vector<double> q_given;
  std::vector<double> x1_given;
  std::vector<double> x2_given;

  bool operator==(const PolicyConfig&) const = default;
};

struct ValidateConfig {
  std::size_t samples = 1'000'000;
  double tolerance = 0.01;

  bool operator==(const ValidateConfig&) const = default;
};

struct ExperimentConfig {
  bool has_channel = false;
  std::vector<std::string> labels;  // state labels; empty means defaults
  std::vector<FadingState> states;
  double sigma_w2 = 1.0;
  ChainConfig chain;
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  PowerBudget budget{100.0, 100.0};
  OptimizerOptions optimizer;
  SweepConfig sweep;
  RegionConfig region;
  DiscreteConfig discrete;
  PolicyConfig policy;
  ValidateConfig validate;
};

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parses the sectioned key = value format; throws ConfigError on any malformed or unknown entry.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

MarkovChain build_chain(const ExperimentConfig& cfg);
GaussianFadingChannel build_gaussian(const ExperimentConfig& cfg);
DiscreteChannelSpec build_discrete(const ExperimentConfig& cfg);
/// Policy from the [policy] section, or the uniform policy with q_size from [discrete].
InputPolicy build_policy(const ExperimentConfig& cfg, std::size_t k);

/**
 * When d1 < d2 the transmitters are relabeled so that user 1 carries the
 * longer delay: gains h1/h2, budgets and discrete inputs are exchanged.
 * Returns the relabeled config and whether a swap happened.
 */
std::pair<ExperimentConfig, bool> relabel_for_delays(const ExperimentConfig& cfg);

struct SweepRow {
  std::int64_t d = 0;
  BoundKind kind = BoundKind::SfIn;
  double sum_rate = 0.0;
  double asymptote = 0.0;
};

std::vector<SweepRow> compute_sweep(const ExperimentConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string run_sweep_delay(const ExperimentConfig& cfg);

struct RegionResult {
  BoundKind kind = BoundKind::SIn;
  Frontier raw;
  Frontier hull;
};

std::vector<RegionResult> compute_region(const ExperimentConfig& cfg);
std::string region_csv(const std::vector<RegionResult>& results, bool hull);
std::string run_region(const ExperimentConfig& cfg);

struct DiscreteResult {
  DiscreteBound bound = DiscreteBound::InnerS;
  RegionBounds caps;
  InputPolicy policy;
};

std::vector<DiscreteResult> compute_discrete(const ExperimentConfig& cfg);
std::string discrete_csv(const std::vector<DiscreteResult>& results);
std::string run_discrete(const ExperimentConfig& cfg);

struct ValidateRow {
  std::string term;
  double analytic = 0.0;
  double empirical = 0.0;
  double abs_error = 0.0;
  bool pass = false;
};

struct ValidateReport {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  std::vector<ValidateRow> rows;
  std::vector<std::string> warnings;

  bool all_pass() const;
  std::string csv() const;
};

ValidateReport run_validate(const ExperimentConfig& cfg);

/// Binary XOR channel over a Gilbert-Elliott chain with a fixed non-uniform policy.
ExperimentConfig default_validate_config();

}  // namespace fsmacwt
