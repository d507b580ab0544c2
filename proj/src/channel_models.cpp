#include "fsmacwt/channel_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsmacwt/errors.hpp"

namespace fsmacwt {

namespace {

constexpr double kSliceTol = 1e-12;
constexpr double kDegradedTol = 1e-9;

std::vector<double> y_given_inputs(const DiscreteChannelSpec& spec) {
  const auto& n = spec.sizes;
  std::vector<double> py(n.states * n.x1 * n.x2 * n.y, 0.0);
  std::size_t row = 0;
  for (std::size_t s = 0; s < n.states; ++s)
    for (std::size_t a = 0; a < n.x1; ++a)
      for (std::size_t b = 0; b < n.x2; ++b, ++row)
        for (std::size_t y = 0; y < n.y; ++y)
          for (std::size_t z = 0; z < n.z; ++z) py[row * n.y + y] += spec(s, a, b, y, z);
  return py;
}

}  // namespace

std::vector<std::string> gaussian_violations(const GaussianFadingChannel& channel, const MarkovChain& chain) {
  std::vector<std::string> out;
  if (channel.states.size() != chain.size()) {
    std::ostringstream os;
    os << "channel has " << channel.states.size() << " states but the chain has " << chain.size();
    out.push_back(os.str());
  }
  if (!channel.labels.empty() && channel.labels != chain.labels()) {
    out.emplace_back("channel state labels differ from the chain's");
  }
  for (std::size_t i = 0; i < channel.states.size(); ++i) {
    const auto& st = channel.states[i];
    if (!(st.sigma_s2 > 0.0) || !std::isfinite(st.sigma_s2)) {
      out.push_back("sigma_s2 must be positive in state " + std::to_string(i));
    }
    if (!std::isfinite(st.h1) || !std::isfinite(st.h2) || !std::isfinite(st.h3)) {
      out.push_back("fading gains must be finite in state " + std::to_string(i));
    }
  }
  if (!(channel.sigma_w2 > 0.0) || !std::isfinite(channel.sigma_w2)) {
    out.emplace_back("sigma_w2 must be positive");
  }
  return out;
}

const GaussianFadingChannel& validate_gaussian(const GaussianFadingChannel& channel, const MarkovChain& chain) {
  auto v = gaussian_violations(channel, chain);
  if (!v.empty()) throw ValidationError(std::move(v));
  return channel;
}

DiscreteChannelSpec DiscreteChannelSpec::zeros(const DiscreteAlphabets& sizes) {
  DiscreteChannelSpec spec;
  spec.sizes = sizes;
  spec.kernel.assign(sizes.states * sizes.x1 * sizes.x2 * sizes.y * sizes.z, 0.0);
  return spec;
}

std::vector<double> fit_z_given_y(const DiscreteChannelSpec& spec) {
  const auto& n = spec.sizes;
  const auto py = y_given_inputs(spec);
  const std::size_t rows = n.states * n.x1 * n.x2;
  std::vector<double> q(n.y * n.z, 0.0);
  for (std::size_t y = 0; y < n.y; ++y) {
    double denom = 0.0;
    for (std::size_t r = 0; r < rows; ++r) denom += py[r * n.y + y] * py[r * n.y + y];
    for (std::size_t z = 0; z < n.z; ++z) {
      if (denom <= 0.0) {
        // y is never produced; any P(z|y) is consistent.
        q[y * n.z + z] = 1.0 / static_cast<double>(n.z);
        continue;
      }
      double num = 0.0;
      for (std::size_t r = 0; r < rows; ++r) num += py[r * n.y + y] * spec.kernel[(r * n.y + y) * n.z + z];
      q[y * n.z + z] = num / denom;
    }
  }
  return q;
}

double degradedness_residual(const DiscreteChannelSpec& spec, const std::vector<double>& z_given_y) {
  const auto& n = spec.sizes;
  const auto py = y_given_inputs(spec);
  const std::size_t rows = n.states * n.x1 * n.x2;
  double worst = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t y = 0; y < n.y; ++y)
      for (std::size_t z = 0; z < n.z; ++z) {
        const double diff = spec.kernel[(r * n.y + y) * n.z + z] - py[r * n.y + y] * z_given_y[y * n.z + z];
        worst = std::max(worst, std::abs(diff));
      }
  return worst;
}

DiscreteChannelSpec validate_discrete(const DiscreteChannelSpec& spec) {
  const auto& n = spec.sizes;
  std::vector<std::string> v;
  if (n.states == 0 || n.x1 == 0 || n.x2 == 0 || n.y == 0 || n.z == 0) {
    v.emplace_back("all alphabet sizes must be at least 1");
    throw ValidationError(std::move(v));
  }
  if (spec.kernel.size() != n.states * n.x1 * n.x2 * n.y * n.z) {
    v.emplace_back("kernel size does not match the alphabet sizes");
    throw ValidationError(std::move(v));
  }
  for (double p : spec.kernel) {
    if (!(p >= 0.0 && p <= 1.0)) {
      v.emplace_back("kernel entries must lie in [0, 1]");
      break;
    }
  }
  for (std::size_t s = 0; s < n.states; ++s)
    for (std::size_t a = 0; a < n.x1; ++a)
      for (std::size_t b = 0; b < n.x2; ++b) {
        double sum = 0.0;
        for (std::size_t y = 0; y < n.y; ++y)
          for (std::size_t z = 0; z < n.z; ++z) sum += spec(s, a, b, y, z);
        if (std::abs(sum - 1.0) > kSliceTol) {
          std::ostringstream os;
          os << "kernel slice (s=" << s << ", x1=" << a << ", x2=" << b << ") sums to " << sum;
          v.push_back(os.str());
        }
      }
  if (!v.empty()) throw ValidationError(std::move(v));

  DiscreteChannelSpec out = spec;
  out.z_given_y.clear();
  if (spec.degraded) {
    auto q = fit_z_given_y(spec);
    const double residual = degradedness_residual(spec, q);
    if (residual >= kDegradedTol) {
      std::ostringstream os;
      os << "kernel flagged degraded but no P(z|y) reproduces it (residual " << residual << ")";
      throw ValidationError({os.str()});
    }
    out.z_given_y = std::move(q);
  }
  return out;
}

DiscreteChannelSpec degraded_factorization(const DiscreteChannelSpec& spec) {
  if (!spec.degraded) throw UnsupportedError("channel is not flagged as degraded");
  const auto checked = spec.z_given_y.empty() ? validate_discrete(spec) : spec;
  const auto& n = checked.sizes;
  const auto py = y_given_inputs(checked);
  DiscreteChannelSpec out = checked;
  std::size_t row = 0;
  for (std::size_t s = 0; s < n.states; ++s)
    for (std::size_t a = 0; a < n.x1; ++a)
      for (std::size_t b = 0; b < n.x2; ++b, ++row)
        for (std::size_t y = 0; y < n.y; ++y)
          for (std::size_t z = 0; z < n.z; ++z)
            out(s, a, b, y, z) = py[row * n.y + y] * checked.z_given_y[y * n.z + z];
  return out;
}

DiscreteChannelSpec swap_inputs(const DiscreteChannelSpec& spec) {
  DiscreteAlphabets sizes = spec.sizes;
  std::swap(sizes.x1, sizes.x2);
  auto out = DiscreteChannelSpec::zeros(sizes);
  out.degraded = spec.degraded;
  out.z_given_y = spec.z_given_y;
  const auto& n = spec.sizes;
  for (std::size_t s = 0; s < n.states; ++s)
    for (std::size_t a = 0; a < n.x1; ++a)
      for (std::size_t b = 0; b < n.x2; ++b)
        for (std::size_t y = 0; y < n.y; ++y)
          for (std::size_t z = 0; z < n.z; ++z) out(s, b, a, y, z) = spec(s, a, b, y, z);
  return out;
}

DiscreteChannelSpec xor_bsc_channel(const std::vector<double>& crossover, double eve_crossover) {
  if (crossover.empty()) throw ShapeError("need one crossover probability per state");
  auto spec = DiscreteChannelSpec::zeros({crossover.size(), 2, 2, 2, 2});
  for (std::size_t s = 0; s < crossover.size(); ++s) {
    const double p = crossover[s];
    if (!(p >= 0.0 && p <= 1.0) || !(eve_crossover >= 0.0 && eve_crossover <= 1.0)) {
      throw DomainError("crossover probabilities must lie in [0, 1]");
    }
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t y = 0; y < 2; ++y)
          for (std::size_t z = 0; z < 2; ++z) {
            const double py = (y == (a ^ b)) ? 1.0 - p : p;
            const double pz = (z == y) ? 1.0 - eve_crossover : eve_crossover;
            spec(s, a, b, y, z) = py * pz;
          }
  }
  spec.degraded = true;
  return validate_discrete(spec);
}

}  // namespace fsmacwt
