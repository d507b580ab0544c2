#pragma once

// Reference computations used only by the tests. None of these call into the
// library's numerical code; they work from definitions.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "fsmacwt/channel_models.hpp"
#include "fsmacwt/discrete_bounds.hpp"
#include "fsmacwt/markov_state.hpp"
#include "fsmacwt/region_geometry.hpp"

namespace oracle {

/// Closed-form K^d for the two-state chain, column-stochastic (to, from), order (G, B).
inline std::array<std::array<double, 2>, 2> two_state_power(double g, double b, int d) {
  const double pg = g / (g + b);
  const double pb = b / (g + b);
  const double ud = std::pow(1.0 - g - b, d);
  std::array<std::array<double, 2>, 2> k{};
  k[0][0] = pg + pb * ud;
  k[1][0] = pb * (1.0 - ud);
  k[0][1] = pg * (1.0 - ud);
  k[1][1] = pb + pg * ud;
  return k;
}

/// ln(x) for x > 0 from the atanh series, in long double.
inline long double series_ln(long double x) {
  int e = 0;
  while (x > 2.0L) {
    x /= 2.0L;
    ++e;
  }
  while (x < 1.0L) {
    x *= 2.0L;
    --e;
  }
  const long double y = (x - 1.0L) / (x + 1.0L);
  long double term = y;
  long double sum = 0.0L;
  for (int n = 1; n < 200; n += 2) {
    sum += term / n;
    term *= y * y;
  }
  // ln 2 from the same series at x = 2 would recurse; use its atanh(1/3) form.
  long double t = 1.0L / 3.0L;
  long double ln2 = 0.0L;
  for (int n = 1; n < 200; n += 2) {
    ln2 += t / n;
    t /= 9.0L;
  }
  ln2 *= 2.0L;
  return 2.0L * sum + e * ln2;
}

inline double series_log2(double x) { return static_cast<double>(series_ln(x) / series_ln(2.0L)); }

/// Outcome tuple (q, t1, t2, s, x1, x2, y, z) with its probability.
struct Atom {
  std::array<int, 8> v;
  double p;
};

/// Enumerates the joint law term by term from its factorization.
inline std::vector<Atom> enumerate_joint(const fsmacwt::DiscreteChannelSpec& spec,
                                         const fsmacwt::InputPolicy& pol,
                                         const fsmacwt::DelayedJointLaw& law) {
  std::vector<Atom> atoms;
  const auto& n = spec.sizes;
  for (std::size_t t1 = 0; t1 < law.k; ++t1)
    for (std::size_t t2 = 0; t2 < law.k; ++t2)
      for (std::size_t s = 0; s < law.k; ++s) {
        const double ps = law.pmf[(t1 * law.k + t2) * law.k + s];
        for (std::size_t q = 0; q < pol.nq; ++q)
          for (std::size_t a = 0; a < n.x1; ++a)
            for (std::size_t b = 0; b < n.x2; ++b)
              for (std::size_t y = 0; y < n.y; ++y)
                for (std::size_t z = 0; z < n.z; ++z) {
                  const double p = ps * pol.q_given[t1 * pol.nq + q] * pol.x1_given[(t1 * pol.nq + q) * pol.nx1 + a] *
                                   pol.x2_given[((t1 * pol.k + t2) * pol.nq + q) * pol.nx2 + b] *
                                   spec.kernel[(((s * n.x1 + a) * n.x2 + b) * n.y + y) * n.z + z];
                  if (p > 0.0) {
                    atoms.push_back({{int(q), int(t1), int(t2), int(s), int(a), int(b), int(y), int(z)}, p});
                  }
                }
      }
  return atoms;
}

enum Idx { Q = 0, T1, T2, S, X1, X2, Y, Z };

using Key = std::vector<int>;

inline Key project(const Atom& a, const std::vector<int>& vars) {
  Key k;
  for (int v : vars) k.push_back(a.v[v]);
  return k;
}

inline std::map<Key, double> marginal(const std::vector<Atom>& atoms, const std::vector<int>& vars) {
  std::map<Key, double> m;
  for (const auto& a : atoms) m[project(a, vars)] += a.p;
  return m;
}

inline std::vector<int> cat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// I(A;B|C) = sum p(a,b,c) log2 [p(a,b,c) p(c) / (p(a,c) p(b,c))].
inline double cond_mi(const std::vector<Atom>& atoms, const std::vector<int>& A, const std::vector<int>& B,
                      const std::vector<int>& C) {
  const auto pabc = marginal(atoms, cat(cat(A, B), C));
  const auto pac = marginal(atoms, cat(A, C));
  const auto pbc = marginal(atoms, cat(B, C));
  const auto pc = marginal(atoms, C);
  double sum = 0.0;
  for (const auto& [key, p] : pabc) {
    const Key ka(key.begin(), key.begin() + A.size());
    const Key kb(key.begin() + A.size(), key.begin() + A.size() + B.size());
    const Key kc(key.begin() + A.size() + B.size(), key.end());
    sum += p * std::log2(p * pc.at(kc) / (pac.at(cat(ka, kc)) * pbc.at(cat(kb, kc))));
  }
  return sum;
}

/// H(A|C) = -sum p(a,c) log2 [p(a,c) / p(c)].
inline double cond_entropy(const std::vector<Atom>& atoms, const std::vector<int>& A, const std::vector<int>& C) {
  const auto pac = marginal(atoms, cat(A, C));
  const auto pc = marginal(atoms, C);
  double sum = 0.0;
  for (const auto& [key, p] : pac) {
    const Key kc(key.begin() + A.size(), key.end());
    sum -= p * std::log2(p / pc.at(kc));
  }
  return sum;
}

inline fsmacwt::InfoTerms definition_terms(const std::vector<Atom>& atoms) {
  const std::vector<int> st = {T1, T2, S};
  const std::vector<int> sq = {T1, T2, S, Q};
  fsmacwt::InfoTerms t;
  t.i_x1_y_x2q = cond_mi(atoms, {X1}, {Y}, cat({X2}, sq));
  t.i_x2_y_x1q = cond_mi(atoms, {X2}, {Y}, cat({X1}, sq));
  t.i_x12_y_q = cond_mi(atoms, {X1, X2}, {Y}, sq);
  t.i_x1_y_q = cond_mi(atoms, {X1}, {Y}, sq);
  t.i_x1_z_q = cond_mi(atoms, {X1}, {Z}, sq);
  t.i_x2_z_q = cond_mi(atoms, {X2}, {Z}, sq);
  t.i_x12_z_q = cond_mi(atoms, {X1, X2}, {Z}, sq);
  t.i_x12_y = cond_mi(atoms, {X1, X2}, {Y}, st);
  t.i_x12_z = cond_mi(atoms, {X1, X2}, {Z}, st);
  t.h_y_zx12 = cond_entropy(atoms, {Y}, {Z, X1, X2, T1, T2, S});
  t.h_y_z = cond_entropy(atoms, {Y}, {Z, T1, T2, S});
  t.h_y = cond_entropy(atoms, {Y}, st);
  return t;
}

/// Capacity in bits of w[x][y] by alternating maximization.
inline double blahut_arimoto(const std::vector<std::vector<double>>& w, int iters = 20000, double tol = 1e-13) {
  const std::size_t nx = w.size();
  const std::size_t ny = w[0].size();
  std::vector<double> r(nx, 1.0 / nx);
  double lower = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> qy(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) qy[y] += r[x] * w[x][y];
    std::vector<double> c(nx, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      double d = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        if (w[x][y] > 0.0) d += w[x][y] * std::log2(w[x][y] / qy[y]);
      c[x] = std::exp2(d);
    }
    double z = 0.0;
    for (std::size_t x = 0; x < nx; ++x) z += r[x] * c[x];
    lower = std::log2(z);
    double upper = 0.0;
    for (double v : c) upper = std::max(upper, std::log2(v));
    for (std::size_t x = 0; x < nx; ++x) r[x] = r[x] * c[x] / z;
    if (upper - lower < tol) break;
  }
  return lower;
}

/// True iff (r1, r2) lies in some pentagon of the list.
inline bool in_union(const std::vector<fsmacwt::RegionBounds>& regions, double r1, double r2) {
  for (const auto& rb : regions)
    if (r1 <= rb.a && r2 <= rb.b && r1 + r2 <= rb.c) return true;
  return false;
}

/// Fraction of an n x n grid over [0, extent]^2 where the frontier disagrees with direct membership.
inline double raster_mismatch(const std::vector<fsmacwt::RegionBounds>& regions, const fsmacwt::Frontier& f,
                              double extent, int n) {
  long bad = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // Irrational offsets keep grid points off edges with rational caps.
      const double r1 = extent * (i + 0.5 + 0.1 * std::numbers::sqrt2) / n;
      const double r2 = extent * (j + 0.5 - 0.1 * std::numbers::sqrt3) / n;
      const bool under = r1 <= f.max_r1() && r2 <= f.height(r1);
      if (under != in_union(regions, r1, r2)) ++bad;
    }
  return static_cast<double>(bad) / (static_cast<double>(n) * n);
}

/// Row-stochastic random vector of length n.
template <class Gen>
std::vector<double> random_simplex(Gen& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) s += (x = u(gen));
  for (auto& x : v) x /= s;
  return v;
}

template <class Gen>
fsmacwt::InputPolicy random_policy(Gen& gen, std::size_t k, std::size_t nq, std::size_t nx1, std::size_t nx2) {
  fsmacwt::InputPolicy p = fsmacwt::InputPolicy::uniform(k, nq, nx1, nx2);
  auto fill = [&](std::vector<double>& v, std::size_t width) {
    for (std::size_t r = 0; r < v.size() / width; ++r) {
      const auto row = random_simplex(gen, width);
      std::copy(row.begin(), row.end(), v.begin() + static_cast<std::ptrdiff_t>(r * width));
    }
  };
  fill(p.q_given, nq);
  fill(p.x1_given, nx1);
  fill(p.x2_given, nx2);
  return p;
}

/// Random kernel P(y, z | s, x1, x2); degraded when requested.
template <class Gen>
fsmacwt::DiscreteChannelSpec random_spec(Gen& gen, const fsmacwt::DiscreteAlphabets& n, bool degraded) {
  auto spec = fsmacwt::DiscreteChannelSpec::zeros(n);
  std::vector<std::vector<double>> zy(n.y);
  for (auto& row : zy) row = random_simplex(gen, n.z);
  for (std::size_t s = 0; s < n.states; ++s)
    for (std::size_t a = 0; a < n.x1; ++a)
      for (std::size_t b = 0; b < n.x2; ++b) {
        if (degraded) {
          const auto py = random_simplex(gen, n.y);
          for (std::size_t y = 0; y < n.y; ++y)
            for (std::size_t z = 0; z < n.z; ++z) spec(s, a, b, y, z) = py[y] * zy[y][z];
        } else {
          const auto pyz = random_simplex(gen, n.y * n.z);
          for (std::size_t y = 0; y < n.y; ++y)
            for (std::size_t z = 0; z < n.z; ++z) spec(s, a, b, y, z) = pyz[y * n.z + z];
        }
      }
  spec.degraded = degraded;
  return spec;
}

}  // namespace oracle
