#include "fsmacwt/gaussian_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fsmacwt/errors.hpp"

namespace fsmacwt {

namespace {

double half_log2(double x) { return 0.5 * std::log2(x); }

void check_shapes(const GaussianFadingChannel& channel, const PowerAllocation& alloc, std::size_t k) {
  if (channel.states.size() != k) throw ShapeError("channel state count does not match the chain");
  if (alloc.k != k || alloc.p1.size() != k || alloc.p2.size() != k * k) {
    throw ShapeError("power allocation does not cover every delayed state");
  }
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::SIn: return "SIn";
    case BoundKind::SOut: return "SOut";
    case BoundKind::SfIn: return "SfIn";
    case BoundKind::SfOut: return "SfOut";
    case BoundKind::CapNoEve: return "CapNoEve";
  }
  return "?";
}

BoundKind parse_bound_kind(std::string_view name) {
  for (auto kind : kAllBoundKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown bound kind '" + std::string(name) + "'");
}

bool is_secrecy_kind(BoundKind kind) { return kind != BoundKind::CapNoEve; }

RateTriple per_state_terms(const GaussianFadingChannel& channel, const PowerAllocation& alloc, std::size_t t1,
                           std::size_t t2, std::size_t s, BoundKind kind) {
  const std::size_t k = channel.states.size();
  if (t1 >= k || t2 >= k || s >= k) throw ShapeError("state index out of range");
  if (alloc.k != k || alloc.p1.size() != k || alloc.p2.size() != k * k) {
    throw ShapeError("power allocation does not cover every delayed state");
  }
  const auto& st = channel.states[s];
  const double ns = st.sigma_s2;
  const double nw = channel.sigma_w2;
  const double a = st.h1 * st.h1 * alloc.power1(t1);
  const double b = st.h2 * st.h2 * alloc.power2(t1, t2);
  const double t = st.h3 * st.h3;

  const double cap1 = half_log2(1.0 + a / ns);
  const double cap2 = half_log2(1.0 + b / ns);
  const double joint = half_log2(1.0 + (a + b) / ns);
  const double eve = half_log2(1.0 + t * (a + b) / (t * ns + nw));

  RateTriple r;
  switch (kind) {
    case BoundKind::SIn:
      r.r1 = cap1 - half_log2((t * a + t * b + t * ns + nw) / (t * b + t * ns + nw));
      r.r2 = cap2 - half_log2((t * a + t * b + t * ns + nw) / (t * a + t * ns + nw));
      r.sum = joint - eve;
      r.sum_alt = r.sum;
      break;
    case BoundKind::SOut:
      r.r1 = cap1 - half_log2((a + ns + nw) / (t * b + t * ns + nw));
      r.r2 = cap2 - half_log2((b + ns + nw) / (t * a + t * ns + nw));
      r.sum = joint - eve;
      r.sum_alt = r.sum;
      break;
    case BoundKind::SfIn: {
      const double key = half_log2(2.0 * std::numbers::pi * std::numbers::e * nw) + half_log2(ns / (t * ns + nw));
      r.r1 = cap1;
      r.r2 = cap2;
      r.sum = joint - eve + std::min(eve, key);
      r.sum_alt = joint - eve;
      break;
    }
    case BoundKind::SfOut: {
      const double rx = a + b + ns;
      r.r1 = joint;
      r.r2 = joint;
      r.sum = joint;
      r.sum_alt = half_log2(2.0 * std::numbers::pi * std::numbers::e * nw) + half_log2(rx / (t * rx + nw));
      break;
    }
    case BoundKind::CapNoEve:
      r.r1 = cap1;
      r.r2 = cap2;
      r.sum = joint;
      r.sum_alt = joint;
      break;
  }
  return r;
}

RateTriple expected_terms(const GaussianFadingChannel& channel, const DelayedJointLaw& law,
                          const PowerAllocation& alloc, BoundKind kind) {
  const std::size_t k = law.k;
  check_shapes(channel, alloc, k);
  RateTriple acc;
  // Fixed (t1, t2, s) order keeps the accumulation bit-reproducible.
  for (std::size_t t1 = 0; t1 < k; ++t1)
    for (std::size_t t2 = 0; t2 < k; ++t2)
      for (std::size_t s = 0; s < k; ++s) {
        const double w = law.at(t1, t2, s);
        if (w == 0.0) continue;
        const auto r = per_state_terms(channel, alloc, t1, t2, s, kind);
        acc.r1 += w * r.r1;
        acc.r2 += w * r.r2;
        acc.sum += w * r.sum;
        acc.sum_alt += w * r.sum_alt;
      }
  return acc;
}

RegionBounds finalize(const RateTriple& e, BoundKind kind) {
  const double sum = kind == BoundKind::SfOut ? std::min(e.sum, e.sum_alt) : e.sum;
  return {std::max(e.r1, 0.0), std::max(e.r2, 0.0), std::max(sum, 0.0)};
}

RegionBounds expected_bounds(const GaussianFadingChannel& channel, const DelayedJointLaw& law,
                             const PowerAllocation& alloc, BoundKind kind) {
  return finalize(expected_terms(channel, law, alloc, kind), kind);
}

RegionBounds expected_bounds(const GaussianFadingChannel& channel, const MarkovChain& chain, std::int64_t d1,
                             std::int64_t d2, const PowerAllocation& alloc, BoundKind kind) {
  return expected_bounds(channel, joint_delayed_pmf(chain, d1, d2), alloc, kind);
}

}  // namespace fsmacwt
