#include "fsmacwt/monte_carlo.hpp"

#include <sstream>

#include "fsmacwt/errors.hpp"

namespace fsmacwt {

std::size_t Rng::categorical(std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) total += p;
  const double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // u landed on the rounding tail: return the last index with positive mass
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return i;
  return 0;
}

std::vector<std::uint16_t> sample_state_path(const MarkovChain& chain, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("path length must be at least 1");
  const std::size_t k = chain.size();
  const auto pi = steady_state(chain).pi;
  std::vector<std::vector<double>> columns(k, std::vector<double>(k));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < k; ++l) columns[j][l] = chain.prob(l, j);
  const std::vector<double> init(pi.data(), pi.data() + k);

  Rng rng(seed);
  std::vector<std::uint16_t> path(n);
  path[0] = static_cast<std::uint16_t>(rng.categorical(init));
  for (std::size_t i = 1; i < n; ++i) path[i] = static_cast<std::uint16_t>(rng.categorical(columns[path[i - 1]]));
  return path;
}

DelayedJointLaw empirical_delayed_joint(const MarkovChain& chain, std::int64_t d1, std::int64_t d2, std::size_t n,
                                        std::uint64_t seed) {
  if (d2 < 0) throw DomainError("delays must be nonnegative");
  if (d1 < d2) throw OrderingError("d1 must be at least d2");
  if (n < static_cast<std::size_t>(d1) + 1) throw DomainError("path length must exceed d1");
  const auto path = sample_state_path(chain, n, seed);
  const std::size_t k = chain.size();
  DelayedJointLaw law{d1, d2, k, std::vector<double>(k * k * k, 0.0)};
  const auto a = static_cast<std::size_t>(d1);
  const auto b = static_cast<std::size_t>(d2);
  std::vector<std::uint64_t> counts(k * k * k, 0);
  for (std::size_t i = a; i < n; ++i) ++counts[(path[i - a] * k + path[i - b]) * k + path[i]];
  const double total = static_cast<double>(n - a);
  for (std::size_t c = 0; c < counts.size(); ++c) law.pmf[c] = static_cast<double>(counts[c]) / total;
  return law;
}

SimulationRun simulate_discrete(const DiscreteChannelSpec& spec, const InputPolicy& policy, const MarkovChain& chain,
                                std::int64_t d1, std::int64_t d2, std::size_t n, std::uint64_t seed) {
  const auto checked = validate_discrete(spec);
  policy.validate();
  const auto& sz = checked.sizes;
  const std::size_t k = chain.size();
  if (sz.states != k || policy.k != k) throw ShapeError("channel, policy and chain disagree on the state count");
  if (policy.nx1 != sz.x1 || policy.nx2 != sz.x2) throw ShapeError("policy input alphabets do not match the channel");
  const auto law = joint_delayed_pmf(chain, d1, d2);
  const std::size_t yz = sz.y * sz.z;

  SimulationRun run;
  run.seed = seed;
  run.length = n;
  run.k = k;
  run.nq = policy.nq;
  run.sizes = sz;
  run.records.reserve(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t triple = rng.categorical(law.pmf);
    const std::size_t t1 = triple / (k * k);
    const std::size_t t2 = (triple / k) % k;
    const std::size_t s = triple % k;
    const std::size_t q = rng.categorical(std::span(policy.q_given).subspan(t1 * policy.nq, policy.nq));
    const std::size_t x1 = rng.categorical(std::span(policy.x1_given).subspan((t1 * policy.nq + q) * sz.x1, sz.x1));
    const std::size_t x2 =
        rng.categorical(std::span(policy.x2_given).subspan(((t1 * k + t2) * policy.nq + q) * sz.x2, sz.x2));
    const std::size_t yzi = rng.categorical(std::span(checked.kernel).subspan(checked.index(s, x1, x2, 0, 0), yz));
    run.records.push_back({static_cast<std::uint16_t>(t1), static_cast<std::uint16_t>(t2),
                           static_cast<std::uint16_t>(s), static_cast<std::uint16_t>(q),
                           static_cast<std::uint16_t>(x1), static_cast<std::uint16_t>(x2),
                           static_cast<std::uint16_t>(yzi / sz.z), static_cast<std::uint16_t>(yzi % sz.z)});
  }
  return run;
}

FullJoint empirical_joint(const SimulationRun& run) {
  FullJoint j;
  const auto& sz = run.sizes;
  const std::size_t dims[8] = {run.nq, run.k, run.k, run.k, sz.x1, sz.x2, sz.y, sz.z};
  std::copy(std::begin(dims), std::end(dims), j.dims);
  j.p.assign(j.cells(), 0.0);
  if (run.records.empty()) return j;
  std::vector<std::uint64_t> counts(j.p.size(), 0);
  for (const auto& r : run.records) {
    // reorder (t1, t2, s, q, ...) into the joint layout (q, t1, t2, s, ...)
    const std::size_t digits[8] = {r[3], r[0], r[1], r[2], r[4], r[5], r[6], r[7]};
    std::size_t idx = 0;
    for (int v = 0; v < 8; ++v) idx = idx * dims[v] + digits[v];
    ++counts[idx];
  }
  const double total = static_cast<double>(run.records.size());
  for (std::size_t i = 0; i < counts.size(); ++i) j.p[i] = static_cast<double>(counts[i]) / total;
  return j;
}

EmpiricalTerms empirical_info_terms(const SimulationRun& run) {
  EmpiricalTerms out;
  const auto j = empirical_joint(run);
  if (run.records.size() < 10 * j.cells()) {
    std::ostringstream os;
    os << "only " << run.records.size() << " samples for " << j.cells()
       << " joint cells; plug-in estimates are strongly biased";
    out.warnings.push_back(os.str());
  }
  out.terms = info_terms(j);
  return out;
}

}  // namespace fsmacwt
