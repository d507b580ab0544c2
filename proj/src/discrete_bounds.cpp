#include "fsmacwt/discrete_bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "fsmacwt/errors.hpp"

namespace fsmacwt {

namespace {

constexpr double kProbFloor = 1e-15;
constexpr double kRowTol = 1e-12;
constexpr double kSnap = 1e-12;

double snap(double v) { return std::abs(v) < kSnap ? 0.0 : v; }

void check_rows(const std::vector<double>& v, std::size_t width, const char* name, std::vector<std::string>& out) {
  for (std::size_t r = 0; r * width < v.size(); ++r) {
    double sum = 0.0;
    bool bad = false;
    for (std::size_t i = 0; i < width; ++i) {
      const double x = v[r * width + i];
      bad = bad || !(x >= 0.0 && x <= 1.0);
      sum += x;
    }
    if (bad || std::abs(sum - 1.0) > kRowTol) {
      std::ostringstream os;
      os << name << " row " << r << " is not a probability vector (sum " << sum << ")";
      out.push_back(os.str());
    }
  }
}

class EntropyCache {
public:
  explicit EntropyCache(const FullJoint& j) : j_(j) {}
  double operator()(unsigned mask) {
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    const double h = marginal_entropy(j_, mask);
    cache_.emplace(mask, h);
    return h;
  }
  // I(A;B|C)
  double mi(unsigned a, unsigned b, unsigned c) {
    return std::max(0.0, snap((*this)(a | c) + (*this)(b | c) - (*this)(a | b | c) - (*this)(c)));
  }
  // H(A|C)
  double ce(unsigned a, unsigned c) { return std::max(0.0, snap((*this)(a | c) - (*this)(c))); }

private:
  const FullJoint& j_;
  std::map<unsigned, double> cache_;
};

std::size_t guarded_cells(const DiscreteChannelSpec& spec, std::size_t nq) {
  const auto& n = spec.sizes;
  const double cells = static_cast<double>(nq) * std::pow(static_cast<double>(n.states), 3) * n.x1 * n.x2 * n.y * n.z;
  if (cells > static_cast<double>(kMaxJointCells)) {
    std::ostringstream os;
    os << "dense joint needs " << cells << " cells, above the guard of " << kMaxJointCells;
    throw GuardError(os.str());
  }
  return static_cast<std::size_t>(cells);
}

void check_cardinality(std::size_t nq, DiscreteBound which) {
  const std::size_t cap = which == DiscreteBound::InnerSf ? kInnerSfMaxQ
                          : which == DiscreteBound::RelaxedOuterSf ? static_cast<std::size_t>(-1)
                                                                   : kInnerSMaxQ;
  if (nq > cap) {
    throw CardinalityError("time-sharing alphabet of size " + std::to_string(nq) + " exceeds " +
                           std::to_string(cap) + " for " + to_string(which));
  }
}

struct Row {
  std::vector<double>* v;
  std::size_t offset;
  std::size_t width;
};

std::vector<Row> policy_rows(InputPolicy& p) {
  std::vector<Row> rows;
  auto add = [&](std::vector<double>& v, std::size_t width) {
    if (width < 2) return;
    for (std::size_t off = 0; off < v.size(); off += width) rows.push_back({&v, off, width});
  };
  add(p.q_given, p.nq);
  add(p.x1_given, p.nx1);
  add(p.x2_given, p.nx2);
  return rows;
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void dirichlet_fill(std::vector<double>& v, std::size_t width, std::mt19937_64& rng) {
  for (std::size_t off = 0; off < v.size(); off += width) {
    double total = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      v[off + i] = -std::log(1.0 - unit_uniform(rng));
      total += v[off + i];
    }
    for (std::size_t i = 0; i < width; ++i) v[off + i] /= total;
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

InputPolicy InputPolicy::uniform(std::size_t k, std::size_t nq, std::size_t nx1, std::size_t nx2) {
  if (k == 0 || nq == 0 || nx1 == 0 || nx2 == 0) throw ShapeError("policy alphabets must be nonempty");
  InputPolicy p;
  p.k = k;
  p.nq = nq;
  p.nx1 = nx1;
  p.nx2 = nx2;
  p.q_given.assign(k * nq, 1.0 / static_cast<double>(nq));
  p.x1_given.assign(k * nq * nx1, 1.0 / static_cast<double>(nx1));
  p.x2_given.assign(k * k * nq * nx2, 1.0 / static_cast<double>(nx2));
  return p;
}

void InputPolicy::validate() const {
  std::vector<std::string> v;
  if (k == 0 || nq == 0 || nx1 == 0 || nx2 == 0) v.emplace_back("policy alphabets must be nonempty");
  if (q_given.size() != k * nq) v.emplace_back("q_given needs k * |Q| entries");
  if (x1_given.size() != k * nq * nx1) v.emplace_back("x1_given needs k * |Q| * |X1| entries");
  if (x2_given.size() != k * k * nq * nx2) v.emplace_back("x2_given needs k * k * |Q| * |X2| entries");
  if (!v.empty()) throw ValidationError(std::move(v));
  check_rows(q_given, nq, "q_given", v);
  check_rows(x1_given, nx1, "x1_given", v);
  check_rows(x2_given, nx2, "x2_given", v);
  if (!v.empty()) throw ValidationError(std::move(v));
}

std::size_t FullJoint::cells() const {
  std::size_t c = 1;
  for (auto d : dims) c *= d;
  return c;
}

FullJoint assemble_joint(const DiscreteChannelSpec& spec, const InputPolicy& policy, const DelayedJointLaw& law) {
  const auto& n = spec.sizes;
  const std::size_t k = law.k;
  if (n.states != k || policy.k != k) throw ShapeError("channel, policy and state law disagree on the state count");
  if (policy.nx1 != n.x1 || policy.nx2 != n.x2) throw ShapeError("policy input alphabets do not match the channel");
  if (spec.kernel.size() != n.states * n.x1 * n.x2 * n.y * n.z) throw ShapeError("kernel size mismatch");
  guarded_cells(spec, policy.nq);

  FullJoint j;
  const std::size_t dims[8] = {policy.nq, k, k, k, n.x1, n.x2, n.y, n.z};
  std::copy(std::begin(dims), std::end(dims), j.dims);
  j.p.assign(j.cells(), 0.0);
  const std::size_t yz = n.y * n.z;
  std::size_t idx = 0;
  for (std::size_t q = 0; q < policy.nq; ++q)
    for (std::size_t t1 = 0; t1 < k; ++t1)
      for (std::size_t t2 = 0; t2 < k; ++t2)
        for (std::size_t s = 0; s < k; ++s) {
          const double ws = law.at(t1, t2, s) * policy.q(t1, q);
          for (std::size_t a = 0; a < n.x1; ++a) {
            const double wa = ws * policy.x1(t1, q, a);
            for (std::size_t b = 0; b < n.x2; ++b) {
              const double wb = wa * policy.x2(t1, t2, q, b);
              const std::size_t base = spec.index(s, a, b, 0, 0);
              for (std::size_t c = 0; c < yz; ++c, ++idx) j.p[idx] = wb * spec.kernel[base + c];
            }
          }
        }
  return j;
}

double marginal_entropy(const FullJoint& j, unsigned mask) {
  std::array<std::size_t, 8> stride{};
  std::size_t msize = 1;
  for (int v = 7; v >= 0; --v) {
    if (mask & (1u << v)) {
      stride[v] = msize;
      msize *= j.dims[v];
    }
  }
  std::vector<double> m(msize, 0.0);
  std::array<std::size_t, 8> digit{};
  std::size_t mi = 0;
  for (std::size_t i = 0; i < j.p.size(); ++i) {
    m[mi] += j.p[i];
    // odometer increment, z fastest
    for (int v = 7; v >= 0; --v) {
      if (++digit[v] < j.dims[v]) {
        mi += stride[v];
        break;
      }
      mi -= stride[v] * (j.dims[v] - 1);
      digit[v] = 0;
    }
  }
  double h = 0.0;
  for (double p : m)
    if (p > kProbFloor) h -= p * std::log2(p);
  return h;
}

std::vector<std::pair<std::string, double>> InfoTerms::named() const {
  return {{"I(X1;Y|X2,S,Q)", i_x1_y_x2q}, {"I(X2;Y|X1,S,Q)", i_x2_y_x1q}, {"I(X1,X2;Y|S,Q)", i_x12_y_q},
          {"I(X1;Y|S,Q)", i_x1_y_q},      {"I(X1;Z|S,Q)", i_x1_z_q},      {"I(X2;Z|S,Q)", i_x2_z_q},
          {"I(X1,X2;Z|S,Q)", i_x12_z_q},  {"I(X1,X2;Y|S)", i_x12_y},      {"I(X1,X2;Z|S)", i_x12_z},
          {"H(Y|Z,X1,X2,S)", h_y_zx12},   {"H(Y|Z,S)", h_y_z},            {"H(Y|S)", h_y}};
}

InfoTerms info_terms(const FullJoint& j) {
  EntropyCache h(j);
  const unsigned sq = kStates | kQ;
  InfoTerms t;
  t.i_x1_y_x2q = h.mi(kX1, kY, kX2 | sq);
  t.i_x2_y_x1q = h.mi(kX2, kY, kX1 | sq);
  t.i_x12_y_q = h.mi(kX1 | kX2, kY, sq);
  t.i_x1_y_q = h.mi(kX1, kY, sq);
  t.i_x1_z_q = h.mi(kX1, kZ, sq);
  t.i_x2_z_q = h.mi(kX2, kZ, sq);
  t.i_x12_z_q = h.mi(kX1 | kX2, kZ, sq);
  t.i_x12_y = h.mi(kX1 | kX2, kY, kStates);
  t.i_x12_z = h.mi(kX1 | kX2, kZ, kStates);
  t.h_y_zx12 = h.ce(kY, kZ | kX1 | kX2 | kStates);
  t.h_y_z = h.ce(kY, kZ | kStates);
  t.h_y = h.ce(kY, kStates);
  return t;
}

std::string to_string(DiscreteBound b) {
  switch (b) {
    case DiscreteBound::InnerS: return "inner_s";
    case DiscreteBound::InnerSf: return "inner_sf";
    case DiscreteBound::DegradedOuterS: return "degraded_outer_s";
    case DiscreteBound::RelaxedOuterSf: return "relaxed_outer_sf";
  }
  return "?";
}

DiscreteBound parse_discrete_bound(const std::string& name) {
  for (auto b : {DiscreteBound::InnerS, DiscreteBound::InnerSf, DiscreteBound::DegradedOuterS,
                 DiscreteBound::RelaxedOuterSf}) {
    if (to_string(b) == name) return b;
  }
  throw ConfigError("unknown discrete bound '" + name + "'");
}

RegionBounds bounds_from_terms(const InfoTerms& t, DiscreteBound which) {
  RegionBounds rb;
  switch (which) {
    case DiscreteBound::InnerS:
    case DiscreteBound::DegradedOuterS:
      rb = {t.i_x1_y_x2q - t.i_x1_z_q, t.i_x2_y_x1q - t.i_x2_z_q, t.i_x12_y_q - t.i_x12_z_q};
      break;
    case DiscreteBound::InnerSf:
      rb = {t.i_x1_y_x2q, t.i_x2_y_x1q,
            std::min(t.i_x1_y_x2q + t.i_x2_y_x1q, t.i_x12_y) - t.i_x12_z + std::min(t.i_x12_z, t.h_y_zx12)};
      break;
    case DiscreteBound::RelaxedOuterSf:
      rb = {t.i_x12_y, t.i_x12_y, std::min(t.i_x12_y, t.h_y_z)};
      break;
  }
  return {std::max(0.0, snap(rb.a)), std::max(0.0, snap(rb.b)), std::max(0.0, snap(rb.c))};
}

RegionBounds evaluate_bound(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, const InputPolicy& policy,
                            DiscreteBound which) {
  check_cardinality(policy.nq, which);
  if (which == DiscreteBound::DegradedOuterS) {
    if (!spec.degraded) throw UnsupportedError("degraded outer bound needs a degraded channel");
    return bounds_from_terms(info_terms(assemble_joint(degraded_factorization(spec), policy, law)), which);
  }
  return bounds_from_terms(info_terms(assemble_joint(spec, policy, law)), which);
}

RegionBounds inner_region_s(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, const InputPolicy& policy) {
  return evaluate_bound(spec, law, policy, DiscreteBound::InnerS);
}
RegionBounds inner_region_sf(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, const InputPolicy& policy) {
  return evaluate_bound(spec, law, policy, DiscreteBound::InnerSf);
}
RegionBounds degraded_outer_s(const DiscreteChannelSpec& spec, const DelayedJointLaw& law,
                              const InputPolicy& policy) {
  return evaluate_bound(spec, law, policy, DiscreteBound::DegradedOuterS);
}
RegionBounds relaxed_outer_sf(const DiscreteChannelSpec& spec, const DelayedJointLaw& law,
                              const InputPolicy& policy) {
  return evaluate_bound(spec, law, policy, DiscreteBound::RelaxedOuterSf);
}

RegionBounds inner_region_s(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                            std::int64_t d2, const InputPolicy& policy) {
  return inner_region_s(spec, joint_delayed_pmf(chain, d1, d2), policy);
}
RegionBounds inner_region_sf(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                             std::int64_t d2, const InputPolicy& policy) {
  return inner_region_sf(spec, joint_delayed_pmf(chain, d1, d2), policy);
}
RegionBounds degraded_outer_s(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                              std::int64_t d2, const InputPolicy& policy) {
  return degraded_outer_s(spec, joint_delayed_pmf(chain, d1, d2), policy);
}
RegionBounds relaxed_outer_sf(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                              std::int64_t d2, const InputPolicy& policy) {
  return relaxed_outer_sf(spec, joint_delayed_pmf(chain, d1, d2), policy);
}

PolicySearchResult optimize_policy(const DiscreteChannelSpec& spec, const DelayedJointLaw& law, DiscreteBound which,
                                   const PolicySearchOptions& opts) {
  if (opts.q_size == 0) throw DomainError("q_size must be at least 1");
  if (opts.starts < 1) throw DomainError("starts must be at least 1");
  if (opts.refine_iters < 0) throw DomainError("refine_iters must be nonnegative");
  check_cardinality(opts.q_size, which);
  guarded_cells(spec, opts.q_size);
  // Throws UnsupportedError for non-degraded channels.
  const auto kernel = which == DiscreteBound::DegradedOuterS ? degraded_factorization(spec) : spec;

  auto evaluate = [&](const InputPolicy& p, RegionBounds& rb) {
    rb = bounds_from_terms(info_terms(assemble_joint(kernel, p, law)), which);
    return opts.mu < 0.0 ? rb.c : support_value(rb, opts.mu, 1.0 - opts.mu);
  };

  PolicySearchResult best;
  bool have = false;
  for (int start = 0; start < opts.starts; ++start) {
    auto p = InputPolicy::uniform(law.k, opts.q_size, spec.sizes.x1, spec.sizes.x2);
    if (start > 0) {
      std::mt19937_64 rng(splitmix64(opts.seed + static_cast<std::uint64_t>(start)));
      dirichlet_fill(p.q_given, p.nq, rng);
      dirichlet_fill(p.x1_given, p.nx1, rng);
      dirichlet_fill(p.x2_given, p.nx2, rng);
    }
    RegionBounds rb;
    double value = evaluate(p, rb);
    auto rows = policy_rows(p);
    double step = 0.25;
    for (int pass = 0; pass < opts.refine_iters; ++pass) {
      for (int sweep = 0; sweep < 200; ++sweep) {
        bool improved = false;
        for (const auto& row : rows) {
          auto& v = *row.v;
          for (std::size_t i = 0; i < row.width; ++i)
            for (std::size_t jj = 0; jj < row.width; ++jj) {
              if (i == jj) continue;
              const double moved = std::min(step, v[row.offset + i]);
              if (moved <= 0.0) continue;
              const double oi = v[row.offset + i];
              const double oj = v[row.offset + jj];
              v[row.offset + i] = oi - moved;
              v[row.offset + jj] = oj + moved;
              RegionBounds trial;
              const double tv = evaluate(p, trial);
              if (tv > value + 1e-13) {
                value = tv;
                rb = trial;
                improved = true;
              } else {
                v[row.offset + i] = oi;
                v[row.offset + jj] = oj;
              }
            }
        }
        if (!improved) break;
      }
      step *= 0.5;
    }
    if (!have || value > best.value + 1e-13) {
      best = {p, rb, value};
      have = true;
    }
  }
  return best;
}

PolicySearchResult optimize_policy(const DiscreteChannelSpec& spec, const MarkovChain& chain, std::int64_t d1,
                                   std::int64_t d2, DiscreteBound which, const PolicySearchOptions& opts) {
  return optimize_policy(spec, joint_delayed_pmf(chain, d1, d2), which, opts);
}

}  // namespace fsmacwt
