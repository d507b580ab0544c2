#include "fsmacwt/markov_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "fsmacwt/errors.hpp"

namespace fsmacwt {

namespace {

constexpr double kColumnSumTol = 1e-12;

// BFS levels over the positive-entry graph (edge j -> l when K(l, j) > 0).
std::vector<std::int64_t> bfs_levels(const Matrix& k, bool forward) {
  const auto n = static_cast<std::size_t>(k.rows());
  std::vector<std::int64_t> level(n, -1);
  std::queue<std::size_t> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const auto j = q.front();
    q.pop();
    for (std::size_t l = 0; l < n; ++l) {
      const double w = forward ? k(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j))
                               : k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
      if (w > 0.0 && level[l] < 0) {
        level[l] = level[j] + 1;
        q.push(l);
      }
    }
  }
  return level;
}

void check_structure(const Matrix& k) {
  const auto fwd = bfs_levels(k, true);
  const auto bwd = bfs_levels(k, false);
  const bool irreducible = std::all_of(fwd.begin(), fwd.end(), [](auto v) { return v >= 0; }) &&
                           std::all_of(bwd.begin(), bwd.end(), [](auto v) { return v >= 0; });
  if (!irreducible) throw StructuralError("Markov chain is reducible");

  // The period of an irreducible chain is the gcd of level(j) + 1 - level(l)
  // over all edges j -> l.
  std::int64_t period = 0;
  const auto n = k.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < n; ++l) {
      if (k(l, j) > 0.0) {
        period = std::gcd(period, std::abs(fwd[static_cast<std::size_t>(j)] + 1 - fwd[static_cast<std::size_t>(l)]));
      }
    }
  }
  if (period != 1) {
    std::ostringstream os;
    os << "Markov chain is periodic (period " << period << ")";
    throw StructuralError(os.str());
  }
}

Matrix rank_one(const Vector& pi) {
  return pi * Vector::Ones(pi.size()).transpose();
}

DelayedJointLaw compose_law(const Vector& pi, const Matrix& outer, const Matrix& inner, std::int64_t d1,
                            std::int64_t d2) {
  DelayedJointLaw law;
  law.d1 = d1;
  law.d2 = d2;
  law.k = static_cast<std::size_t>(pi.size());
  law.pmf.assign(law.k * law.k * law.k, 0.0);
  for (std::size_t t1 = 0; t1 < law.k; ++t1) {
    for (std::size_t t2 = 0; t2 < law.k; ++t2) {
      const double w12 = pi(static_cast<Eigen::Index>(t1)) *
                         outer(static_cast<Eigen::Index>(t2), static_cast<Eigen::Index>(t1));
      for (std::size_t s = 0; s < law.k; ++s) {
        law.at(t1, t2, s) = w12 * inner(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t2));
      }
    }
  }
  return law;
}

void check_delays(std::int64_t d1, std::int64_t d2) {
  if (d1 < 0 || d2 < 0) throw DomainError("delays must be nonnegative");
  if (d1 < d2) throw OrderingError("delays must satisfy d1 >= d2; relabel the transmitters first");
}

}  // namespace

MarkovChain::MarkovChain(std::vector<std::string> labels, Matrix transition)
    : labels_(std::move(labels)), transition_(std::move(transition)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (n < 1) throw ShapeError("Markov chain needs at least one state");
  if (transition_.rows() != n || transition_.cols() != n) {
    throw ShapeError("transition matrix must be k x k with k = number of labels");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    double sum = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
      const double p = transition_(l, j);
      if (!(p >= 0.0 && p <= 1.0)) throw DomainError("transition entries must lie in [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kColumnSumTol) {
      std::ostringstream os;
      os << "transition column " << j << " sums to " << sum << ", expected 1";
      throw DomainError(os.str());
    }
  }
  check_structure(transition_);
}

std::optional<std::size_t> MarkovChain::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

GilbertElliottParams GilbertElliottParams::from_transitions(double g, double b) {
  if (!(g > 0.0 && g < 1.0) || !(b > 0.0 && b < 1.0)) {
    throw DomainError("Gilbert-Elliott parameters g and b must lie in (0, 1)");
  }
  return {g, b, 1.0 - g - b, g / b};
}

GilbertElliottParams GilbertElliottParams::from_memory(double u, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("asymmetry c must be positive");
  const double b = (1.0 - u) / (1.0 + c);
  return from_transitions(c * b, b);
}

MarkovChain build_gilbert_elliott(double g, double b) {
  const auto p = GilbertElliottParams::from_transitions(g, b);
  Matrix k(2, 2);
  k << 1.0 - p.b, p.g,
       p.b, 1.0 - p.g;
  return MarkovChain({"G", "B"}, std::move(k));
}

SteadyDistribution steady_state(const MarkovChain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  if (n == 1) return {Vector::Ones(1)};
  // (K - I) pi = 0 with the last balance row replaced by sum(pi) = 1.
  Matrix a = chain.transition() - Matrix::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  Vector pi = a.fullPivLu().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) pi(i) = std::max(pi(i), 0.0);
  pi /= pi.sum();
  return {pi};
}

Matrix d_step_matrix(const MarkovChain& chain, std::int64_t d) {
  if (d < 0) throw DomainError("step count must be nonnegative");
  const auto n = static_cast<Eigen::Index>(chain.size());
  Matrix result = Matrix::Identity(n, n);
  Matrix base = chain.transition();
  auto e = static_cast<std::uint64_t>(d);
  while (e > 0) {
    if (e & 1U) result = base * result;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

DelayedJointLaw joint_delayed_pmf(const MarkovChain& chain, std::int64_t d1, std::int64_t d2) {
  check_delays(d1, d2);
  const auto pi = steady_state(chain).pi;
  return compose_law(pi, d_step_matrix(chain, d1 - d2), d_step_matrix(chain, d2), d1, d2);
}

DelayedJointLaw asymptotic_delayed_pmf(const MarkovChain& chain, std::int64_t d1, std::int64_t d2) {
  check_delays(d1, d2);
  const auto pi = steady_state(chain).pi;
  const auto n = pi.size();
  const Matrix limit = rank_one(pi);
  const Matrix outer = d1 - d2 > 0 ? limit : Matrix::Identity(n, n);
  const Matrix inner = d2 > 0 ? limit : Matrix::Identity(n, n);
  return compose_law(pi, outer, inner, d1, d2);
}

GilbertElliottParams memory_params(const MarkovChain& chain) {
  if (chain.size() != 2) throw UnsupportedError("memory parameters are defined for two-state chains only");
  // Irreducibility guarantees g, b > 0; g = 1 or b = 1 are legal here.
  const double g = chain.prob(0, 1);
  const double b = chain.prob(1, 0);
  return {g, b, 1.0 - g - b, g / b};
}

}  // namespace fsmacwt
