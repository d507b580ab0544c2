#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fsmacwt/allocation.hpp"
#include "fsmacwt/errors.hpp"
#include "fsmacwt/gaussian_bounds.hpp"
#include "oracles.hpp"

using namespace fsmacwt;

namespace {

GaussianFadingChannel fig3_channel(double sigma_w2) {
  GaussianFadingChannel ch;
  ch.labels = {"G", "B"};
  ch.states = {{1.0, 1.0, 0.8, 1.0}, {0.5, 0.7, 0.2, 2.0}};
  ch.sigma_w2 = sigma_w2;
  return ch;
}

double hl(double x) { return 0.5 * std::log2(x); }

struct Draw {
  GaussianFadingChannel ch;
  MarkovChain chain;
  PowerBudget budget;
};

Draw random_draw(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> gain(0.0, 2.0);
  std::uniform_real_distribution<double> var(0.5, 10.0);
  std::uniform_real_distribution<double> pw(0.0, 200.0);
  std::uniform_real_distribution<double> prob(0.02, 0.98);
  GaussianFadingChannel ch;
  for (int i = 0; i < 2; ++i) ch.states.push_back({gain(gen), gain(gen), gain(gen), var(gen)});
  ch.sigma_w2 = var(gen);
  const double g = prob(gen);
  const double b = std::min(prob(gen), 0.99 - g + 1e-3);
  return {ch, build_gilbert_elliott(g, std::max(b, 0.01)), {pw(gen), pw(gen)}};
}

}  // namespace

TEST(BoundKind, NamesRoundTrip) {
  for (auto k : kAllBoundKinds) EXPECT_EQ(parse_bound_kind(to_string(k)), k);
  EXPECT_THROW(parse_bound_kind("sin"), ConfigError);
  EXPECT_FALSE(is_secrecy_kind(BoundKind::CapNoEve));
  EXPECT_TRUE(is_secrecy_kind(BoundKind::SfOut));
}

TEST(PerStateTerms, ZeroPowerGivesZero) {
  const auto ch = fig3_channel(400.0);
  const PowerAllocation zero(2);
  const auto r = per_state_terms(ch, zero, 0, 1, 1, BoundKind::SIn);
  EXPECT_DOUBLE_EQ(r.r1, 0.0);
  EXPECT_DOUBLE_EQ(r.r2, 0.0);
  EXPECT_DOUBLE_EQ(r.sum, 0.0);
}

TEST(PerStateTerms, BlindEavesdropperHasNoPenalty) {
  auto ch = fig3_channel(3.0);
  for (auto& s : ch.states) s.h3 = 0.0;
  const auto alloc = uniform_allocation({100.0, 60.0}, 2);
  const auto r = per_state_terms(ch, alloc, 1, 0, 1, BoundKind::SIn);
  const auto& st = ch.states[1];
  EXPECT_NEAR(r.sum, hl(1.0 + (st.h1 * st.h1 * 100.0 + st.h2 * st.h2 * 60.0) / st.sigma_s2), 1e-14);
  EXPECT_NEAR(r.r1, hl(1.0 + st.h1 * st.h1 * 100.0 / st.sigma_s2), 1e-14);
}

TEST(PerStateTerms, FirstLogAgainstSeriesEvaluation) {
  GaussianFadingChannel ch;
  ch.states = {{1.0, 1.0, 0.0, 1.0}};
  ch.sigma_w2 = 1.0;
  PowerAllocation alloc(1);
  alloc.p1[0] = 100.0;
  const auto r = per_state_terms(ch, alloc, 0, 0, 0, BoundKind::SIn);
  const double ref = 0.5 * oracle::series_log2(101.0);
  EXPECT_NEAR(ref, 3.3291, 5e-5);
  EXPECT_NEAR(r.r1, ref, 1e-13);
}

TEST(PerStateTerms, LiteralFormulas) {
  const auto ch = fig3_channel(2.5);
  PowerAllocation alloc(2);
  alloc.p1 = {30.0, 170.0};
  alloc.p2 = {10.0, 50.0, 90.0, 140.0};
  const std::size_t t1 = 1, t2 = 0, s = 0;
  const auto& st = ch.states[s];
  const double a = st.h1 * st.h1 * 170.0;
  const double b = st.h2 * st.h2 * 90.0;
  const double t = st.h3 * st.h3;
  const double ns = st.sigma_s2;
  const double nw = ch.sigma_w2;

  const double joint = hl(1.0 + (a + b) / ns);
  const double eve = hl(1.0 + t * (a + b) / (t * ns + nw));

  const auto sin = per_state_terms(ch, alloc, t1, t2, s, BoundKind::SIn);
  EXPECT_NEAR(sin.r1, hl(1.0 + a / ns) - hl((t * (a + b + ns) + nw) / (t * (b + ns) + nw)), 1e-13);
  EXPECT_NEAR(sin.r2, hl(1.0 + b / ns) - hl((t * (a + b + ns) + nw) / (t * (a + ns) + nw)), 1e-13);
  EXPECT_NEAR(sin.sum, joint - eve, 1e-13);

  const auto sout = per_state_terms(ch, alloc, t1, t2, s, BoundKind::SOut);
  EXPECT_NEAR(sout.r1, hl(1.0 + a / ns) - hl((a + ns + nw) / (t * (b + ns) + nw)), 1e-13);
  EXPECT_NEAR(sout.sum, joint - eve, 1e-13);

  const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  const auto sfin = per_state_terms(ch, alloc, t1, t2, s, BoundKind::SfIn);
  const double key = hl(two_pi_e * nw) + hl(ns / (t * ns + nw));
  EXPECT_NEAR(sfin.sum, joint - eve + std::min(eve, key), 1e-13);
  EXPECT_NEAR(sfin.sum_alt, joint - eve, 1e-13);

  const auto sfout = per_state_terms(ch, alloc, t1, t2, s, BoundKind::SfOut);
  EXPECT_NEAR(sfout.r1, joint, 1e-13);
  EXPECT_NEAR(sfout.sum_alt, hl(two_pi_e * nw) + hl((a + b + ns) / (t * (a + b + ns) + nw)), 1e-13);

  const auto cap = per_state_terms(ch, alloc, t1, t2, s, BoundKind::CapNoEve);
  EXPECT_NEAR(cap.r1, sfin.r1, 1e-15);
  EXPECT_NEAR(cap.sum, joint, 1e-15);
}

TEST(PerStateTerms, ShapeChecks) {
  const auto ch = fig3_channel(1.0);
  EXPECT_THROW(per_state_terms(ch, PowerAllocation(3), 0, 0, 0, BoundKind::SIn), ShapeError);
  EXPECT_THROW(per_state_terms(ch, PowerAllocation(2), 0, 2, 0, BoundKind::SIn), ShapeError);
}

TEST(ExpectedBounds, EqualDelaysUseSingleTransition) {
  const auto ch = fig3_channel(4.0);
  const double g = 0.1, b = 0.2;
  const auto chain = build_gilbert_elliott(g, b);
  PowerAllocation alloc(2);
  alloc.p1 = {120.0, 60.0};
  alloc.p2 = {150.0, 0.0, 0.0, 20.0};
  const int d = 3;
  const auto k = oracle::two_state_power(g, b, d);
  const double pi[2] = {g / (g + b), b / (g + b)};
  for (auto kind : kAllBoundKinds) {
    RateTriple ref;
    for (std::size_t t = 0; t < 2; ++t)
      for (std::size_t s = 0; s < 2; ++s) {
        const auto r = per_state_terms(ch, alloc, t, t, s, kind);
        const double w = pi[t] * k[s][t];
        ref.r1 += w * r.r1;
        ref.r2 += w * r.r2;
        ref.sum += w * r.sum;
        ref.sum_alt += w * r.sum_alt;
      }
    const auto got = expected_bounds(ch, chain, d, d, alloc, kind);
    const auto want = finalize(ref, kind);
    EXPECT_NEAR(got.a, want.a, 1e-12) << to_string(kind);
    EXPECT_NEAR(got.b, want.b, 1e-12);
    EXPECT_NEAR(got.c, want.c, 1e-12);
  }
}

TEST(ExpectedBounds, ZeroDelayIsPerfectCsiAverage) {
  const auto ch = fig3_channel(1.0);
  const auto chain = build_gilbert_elliott(0.3, 0.1);
  const auto pi = steady_state(chain).pi;
  const auto alloc = uniform_allocation({80.0, 40.0}, 2);
  for (auto kind : kAllBoundKinds) {
    RateTriple ref;
    for (std::size_t s = 0; s < 2; ++s) {
      const auto r = per_state_terms(ch, alloc, s, s, s, kind);
      ref.r1 += pi(s) * r.r1;
      ref.r2 += pi(s) * r.r2;
      ref.sum += pi(s) * r.sum;
      ref.sum_alt += pi(s) * r.sum_alt;
    }
    const auto got = expected_bounds(ch, chain, 0, 0, alloc, kind);
    EXPECT_NEAR(got.c, finalize(ref, kind).c, 1e-12);
  }
}

TEST(ExpectedBounds, NonNegative) {
  std::mt19937_64 gen(21);
  for (int i = 0; i < 50; ++i) {
    const auto d = random_draw(gen);
    const auto alloc = uniform_allocation(d.budget, 2);
    for (auto kind : kAllBoundKinds) {
      const auto rb = expected_bounds(d.ch, d.chain, 4, 1, alloc, kind);
      EXPECT_GE(rb.a, 0.0);
      EXPECT_GE(rb.b, 0.0);
      EXPECT_GE(rb.c, 0.0);
    }
  }
}

TEST(ExpectedBounds, BlindEavesdropperCollapsesToNoEve) {
  std::mt19937_64 gen(22);
  for (int i = 0; i < 20; ++i) {
    auto d = random_draw(gen);
    for (auto& s : d.ch.states) s.h3 = 0.0;
    const auto alloc = uniform_allocation(d.budget, 2);
    const auto sin = expected_bounds(d.ch, d.chain, 3, 2, alloc, BoundKind::SIn);
    const auto cap = expected_bounds(d.ch, d.chain, 3, 2, alloc, BoundKind::CapNoEve);
    EXPECT_NEAR(sin.a, cap.a, 1e-12);
    EXPECT_NEAR(sin.b, cap.b, 1e-12);
    EXPECT_NEAR(sin.c, cap.c, 1e-12);
    // with sigma_s2 >= 0.5 the key term is positive, so min(0, key) = 0
    const auto sfin = expected_bounds(d.ch, d.chain, 3, 2, alloc, BoundKind::SfIn);
    EXPECT_NEAR(sfin.c, cap.c, 1e-12);
  }
}

TEST(ExpectedBounds, NoEveMonotoneInPower) {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 20; ++i) {
    const auto d = random_draw(gen);
    const auto lo = expected_bounds(d.ch, d.chain, 2, 1, uniform_allocation(d.budget, 2), BoundKind::CapNoEve);
    const auto hi = expected_bounds(d.ch, d.chain, 2, 1,
                                    uniform_allocation({d.budget.p1 * 1.7, d.budget.p2 * 1.7}, 2), BoundKind::CapNoEve);
    EXPECT_GE(hi.a, lo.a);
    EXPECT_GE(hi.b, lo.b);
    EXPECT_GE(hi.c, lo.c);
  }
}

TEST(ExpectedBounds, FeedbackInnerBelowFeedbackOuter) {
  std::mt19937_64 gen(24);
  for (int i = 0; i < 100; ++i) {
    const auto d = random_draw(gen);
    const auto alloc = uniform_allocation(d.budget, 2);
    const auto in = expected_bounds(d.ch, d.chain, 5, 2, alloc, BoundKind::SfIn);
    const auto out = expected_bounds(d.ch, d.chain, 5, 2, alloc, BoundKind::SfOut);
    EXPECT_LE(in.a, out.a + 1e-12);
    EXPECT_LE(in.b, out.b + 1e-12);
    EXPECT_LE(in.c, out.c + 1e-12);
  }
}

TEST(ExpectedBounds, NoFeedbackSumCapsCoincide) {
  // The two no-feedback families share the sum cap; individual caps differ in the penalty.
  std::mt19937_64 gen(25);
  for (int i = 0; i < 30; ++i) {
    const auto d = random_draw(gen);
    const auto alloc = uniform_allocation(d.budget, 2);
    const auto in = expected_bounds(d.ch, d.chain, 1, 0, alloc, BoundKind::SIn);
    const auto out = expected_bounds(d.ch, d.chain, 1, 0, alloc, BoundKind::SOut);
    EXPECT_NEAR(in.c, out.c, 1e-12);
  }
}
