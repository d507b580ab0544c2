#include <gtest/gtest.h>

#include <random>

#include "fsmacwt/discrete_bounds.hpp"
#include "fsmacwt/errors.hpp"
#include "oracles.hpp"

using namespace fsmacwt;

namespace {

MarkovChain single_state() {
  Matrix k(1, 1);
  k << 1.0;
  return MarkovChain({"s"}, k);
}

void expect_terms_near(const InfoTerms& a, const InfoTerms& b, double tol) {
  const auto na = a.named();
  const auto nb = b.named();
  for (std::size_t i = 0; i < na.size(); ++i) EXPECT_NEAR(na[i].second, nb[i].second, tol) << na[i].first;
}

// Y = X1 + X2 in {0, 1, 2}; Z is Y erased with probability e (symbol 3).
DiscreteChannelSpec adder_with_erasure(double e) {
  auto spec = DiscreteChannelSpec::zeros({1, 2, 2, 3, 4});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      spec(0, a, b, a + b, a + b) = 1.0 - e;
      spec(0, a, b, a + b, 3) = e;
    }
  spec.degraded = true;
  return validate_discrete(spec);
}

// Binary Y = X1 through a Z channel; no eavesdropper output.
DiscreteChannelSpec z_channel(double flip) {
  auto spec = DiscreteChannelSpec::zeros({1, 2, 1, 2, 1});
  spec(0, 0, 0, 0, 0) = 1.0;
  spec(0, 1, 0, 0, 0) = flip;
  spec(0, 1, 0, 1, 0) = 1.0 - flip;
  return spec;
}

double h2(double p) { return p <= 0.0 || p >= 1.0 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST(InputPolicy, UniformAndValidation) {
  auto p = InputPolicy::uniform(2, 3, 2, 4);
  EXPECT_NO_THROW(p.validate());
  EXPECT_NEAR(p.q(1, 2), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.x2(1, 0, 2, 3), 0.25);
  p.x1_given[0] = 0.9;
  EXPECT_THROW(p.validate(), ValidationError);
  EXPECT_THROW(InputPolicy::uniform(0, 1, 1, 1), ShapeError);
}

TEST(AssembleJoint, PointMassPolicy) {
  const auto chain = single_state();
  const auto spec = z_channel(0.3);
  auto pol = InputPolicy::uniform(1, 1, 2, 1);
  pol.x1_given = {0.0, 1.0};
  const auto j = assemble_joint(spec, pol, joint_delayed_pmf(chain, 0, 0));
  ASSERT_EQ(j.cells(), 4u);
  EXPECT_DOUBLE_EQ(j.p[0], 0.0);
  EXPECT_DOUBLE_EQ(j.p[2], 0.3);
  EXPECT_DOUBLE_EQ(j.p[3], 0.7);
}

TEST(AssembleJoint, UniformBinaryCells) {
  const auto spec = xor_bsc_channel({0.1}, 0.2);
  const auto j = assemble_joint(spec, InputPolicy::uniform(1, 1, 2, 2), joint_delayed_pmf(single_state(), 0, 0));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t z = 0; z < 2; ++z)
          EXPECT_NEAR(j.p[((a * 2 + b) * 2 + y) * 2 + z], 0.25 * spec(0, a, b, y, z), 1e-16);
}

TEST(AssembleJoint, GuardAndShapes) {
  const auto chain = build_gilbert_elliott(0.1, 0.1);
  const auto law = joint_delayed_pmf(chain, 1, 0);
  const auto big = DiscreteChannelSpec::zeros({2, 40, 40, 20, 20});
  EXPECT_THROW(assemble_joint(big, InputPolicy::uniform(2, 1, 40, 40), law), GuardError);
  const auto spec = xor_bsc_channel({0.1, 0.2}, 0.2);
  EXPECT_THROW(assemble_joint(spec, InputPolicy::uniform(2, 1, 3, 2), law), ShapeError);
  EXPECT_THROW(assemble_joint(spec, InputPolicy::uniform(1, 1, 2, 2), law), ShapeError);
}

TEST(InfoTerms, MatchDefinitionOracle) {
  std::mt19937_64 gen(51);
  std::uniform_real_distribution<double> prob(0.05, 0.6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto chain = build_gilbert_elliott(prob(gen), prob(gen));
    const auto law = joint_delayed_pmf(chain, 2, 1);
    const auto spec = oracle::random_spec(gen, {2, 2, 2, 2, 2}, trial % 2 == 0);
    const auto pol = oracle::random_policy(gen, 2, 2, 2, 2);
    const auto lib = info_terms(assemble_joint(spec, pol, law));
    const auto ref = oracle::definition_terms(oracle::enumerate_joint(spec, pol, law));
    expect_terms_near(lib, ref, 1e-10);
  }
}

TEST(InfoTerms, Properties) {
  std::mt19937_64 gen(52);
  for (int trial = 0; trial < 50; ++trial) {
    const auto chain = build_gilbert_elliott(0.2, 0.3);
    const auto law = joint_delayed_pmf(chain, 3, 1);
    const bool degraded = trial % 2 == 0;
    const auto spec = oracle::random_spec(gen, {2, 2, 3, 3, 2}, degraded);
    const auto pol = oracle::random_policy(gen, 2, 2, 2, 3);
    const auto t = info_terms(assemble_joint(spec, pol, law));
    for (const auto& [name, v] : t.named()) EXPECT_GE(v, 0.0) << name;
    EXPECT_LE(t.h_y_z, t.h_y + 1e-12);
    EXPECT_NEAR(t.i_x12_y_q, t.i_x1_y_q + t.i_x2_y_x1q, 1e-10);
    if (degraded) EXPECT_LE(t.i_x12_z, t.i_x12_y + 1e-12);
  }
}

TEST(InfoTerms, IndependentEavesdropper) {
  std::mt19937_64 gen(53);
  auto spec = oracle::random_spec(gen, {2, 2, 2, 2, 3}, true);
  for (std::size_t y = 0; y < 2; ++y) spec.z_given_y = {};
  // overwrite P(z|y) with a row that ignores y
  const std::vector<double> pz = {0.2, 0.5, 0.3};
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t y = 0; y < 2; ++y) {
          double py = 0.0;
          for (std::size_t z = 0; z < 3; ++z) py += spec(s, a, b, y, z);
          for (std::size_t z = 0; z < 3; ++z) spec(s, a, b, y, z) = py * pz[z];
        }
  const auto law = joint_delayed_pmf(build_gilbert_elliott(0.3, 0.3), 1, 1);
  const auto pol = oracle::random_policy(gen, 2, 1, 2, 2);
  const auto t = info_terms(assemble_joint(spec, pol, law));
  EXPECT_EQ(t.i_x1_z_q, 0.0);
  EXPECT_EQ(t.i_x2_z_q, 0.0);
  EXPECT_EQ(t.i_x12_z_q, 0.0);
  EXPECT_EQ(t.i_x12_z, 0.0);

  const auto inner = inner_region_s(spec, law, pol);
  EXPECT_NEAR(inner.a, t.i_x1_y_x2q, 1e-15);
  EXPECT_NEAR(inner.b, t.i_x2_y_x1q, 1e-15);
  EXPECT_NEAR(inner.c, t.i_x12_y_q, 1e-15);

  const auto sf = inner_region_sf(spec, law, pol);
  EXPECT_NEAR(sf.c, std::min(t.i_x1_y_x2q + t.i_x2_y_x1q, t.i_x12_y), 1e-15);
  EXPECT_NEAR(relaxed_outer_sf(spec, law, pol).c, t.i_x12_y, 1e-15);
}

TEST(InfoTerms, NoiselessFirstUser) {
  auto spec = DiscreteChannelSpec::zeros({2, 3, 1, 3, 1});
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t a = 0; a < 3; ++a) spec(s, a, 0, a, 0) = 1.0;
  std::mt19937_64 gen(54);
  const auto pol = oracle::random_policy(gen, 2, 2, 3, 1);
  const auto law = joint_delayed_pmf(build_gilbert_elliott(0.2, 0.1), 2, 0);
  const auto t = info_terms(assemble_joint(spec, pol, law));
  const auto atoms = oracle::enumerate_joint(spec, pol, law);
  EXPECT_NEAR(t.i_x1_y_x2q, oracle::cond_entropy(atoms, {oracle::X1}, {oracle::T1, oracle::Q}), 1e-12);
  EXPECT_EQ(t.h_y_zx12, 0.0);
}

TEST(InnerRegions, EavesdropperSeesEverything) {
  auto spec = xor_bsc_channel({0.1, 0.3}, 0.0);
  std::mt19937_64 gen(55);
  const auto law = joint_delayed_pmf(build_gilbert_elliott(0.05, 0.05), 2, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pol = oracle::random_policy(gen, 2, 2, 2, 2);
    const auto s = inner_region_s(spec, law, pol);
    EXPECT_EQ(s.c, 0.0);
    EXPECT_EQ(tighten(s), (RegionBounds{0.0, 0.0, 0.0}));
    EXPECT_EQ(relaxed_outer_sf(spec, law, pol).c, 0.0);
    EXPECT_EQ(tighten(degraded_outer_s(spec, law, pol)), (RegionBounds{0.0, 0.0, 0.0}));
  }
}

TEST(InnerRegions, DeterministicOutputDropsKeyTerm) {
  auto spec = DiscreteChannelSpec::zeros({1, 2, 2, 2, 2});
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const std::size_t y = a ^ b;
      spec(0, a, b, y, y) = 0.7;
      spec(0, a, b, y, 1 - y) = 0.3;
    }
  const auto law = joint_delayed_pmf(single_state(), 0, 0);
  std::mt19937_64 gen(56);
  const auto pol = oracle::random_policy(gen, 1, 1, 2, 2);
  const auto t = info_terms(assemble_joint(spec, pol, law));
  EXPECT_EQ(t.h_y_zx12, 0.0);
  const auto sf = inner_region_sf(spec, law, pol);
  EXPECT_NEAR(sf.c, std::max(0.0, std::min(t.i_x1_y_x2q + t.i_x2_y_x1q, t.i_x12_y) - t.i_x12_z), 1e-14);
}

TEST(DegradedOuter, EqualsInnerOnDegradedSpecs) {
  std::mt19937_64 gen(57);
  const auto law = joint_delayed_pmf(build_gilbert_elliott(0.15, 0.25), 4, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = validate_discrete(oracle::random_spec(gen, {2, 2, 2, 3, 2}, true));
    const auto pol = oracle::random_policy(gen, 2, 2, 2, 2);
    const auto in = inner_region_s(spec, law, pol);
    const auto out = degraded_outer_s(spec, law, pol);
    EXPECT_NEAR(in.a, out.a, 1e-12);
    EXPECT_NEAR(in.b, out.b, 1e-12);
    EXPECT_NEAR(in.c, out.c, 1e-12);
  }
  const auto nondeg = oracle::random_spec(gen, {2, 2, 2, 2, 2}, false);
  EXPECT_THROW(degraded_outer_s(nondeg, law, InputPolicy::uniform(2, 1, 2, 2)), UnsupportedError);
}

TEST(DegradedOuter, FullErasureGivesNonSecretBounds) {
  const auto spec = adder_with_erasure(1.0);
  const auto law = joint_delayed_pmf(single_state(), 0, 0);
  const auto pol = InputPolicy::uniform(1, 1, 2, 2);
  const auto t = info_terms(assemble_joint(spec, pol, law));
  const auto out = degraded_outer_s(spec, law, pol);
  EXPECT_NEAR(out.a, t.i_x1_y_x2q, 1e-15);
  EXPECT_NEAR(out.c, t.i_x12_y_q, 1e-15);
  EXPECT_NEAR(out.c, 1.5, 1e-12);
}

TEST(RelaxedOuter, DominatesFeedbackInner) {
  std::mt19937_64 gen(58);
  std::uniform_real_distribution<double> prob(0.05, 0.6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto law = joint_delayed_pmf(build_gilbert_elliott(prob(gen), prob(gen)), 3, 1);
    const auto spec = oracle::random_spec(gen, {2, 2, 2, 2, 2}, true);
    const auto pol = oracle::random_policy(gen, 2, 2, 2, 2);
    const auto in = inner_region_sf(spec, law, pol);
    const auto out = relaxed_outer_sf(spec, law, pol);
    EXPECT_LE(in.a, out.a + 1e-12);
    EXPECT_LE(in.b, out.b + 1e-12);
    EXPECT_LE(in.c, out.c + 1e-12);
  }
}

TEST(Cardinality, Limits) {
  const auto spec = xor_bsc_channel({0.1, 0.3}, 0.2);
  const auto law = joint_delayed_pmf(build_gilbert_elliott(0.1, 0.1), 1, 0);
  EXPECT_THROW(inner_region_sf(spec, law, InputPolicy::uniform(2, 3, 2, 2)), CardinalityError);
  EXPECT_THROW(inner_region_s(spec, law, InputPolicy::uniform(2, 7, 2, 2)), CardinalityError);
  EXPECT_NO_THROW(inner_region_s(spec, law, InputPolicy::uniform(2, 6, 2, 2)));
  EXPECT_NO_THROW(relaxed_outer_sf(spec, law, InputPolicy::uniform(2, 7, 2, 2)));
  PolicySearchOptions opts;
  opts.q_size = 3;
  EXPECT_THROW(optimize_policy(spec, law, DiscreteBound::InnerSf, opts), CardinalityError);
}

TEST(Names, RoundTrip) {
  for (auto b : {DiscreteBound::InnerS, DiscreteBound::InnerSf, DiscreteBound::DegradedOuterS,
                 DiscreteBound::RelaxedOuterSf})
    EXPECT_EQ(parse_discrete_bound(to_string(b)), b);
  EXPECT_THROW(parse_discrete_bound("outer"), ConfigError);
}

TEST(OptimizePolicy, AdderMatchesPolicyGrid) {
  const auto spec = adder_with_erasure(0.5);
  const auto law = joint_delayed_pmf(single_state(), 0, 0);
  double grid_best = 0.0;
  auto pol = InputPolicy::uniform(1, 1, 2, 2);
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      pol.x1_given = {i / 10.0, 1 - i / 10.0};
      pol.x2_given = {j / 10.0, 1 - j / 10.0};
      grid_best = std::max(grid_best, inner_region_s(spec, law, pol).c);
    }
  PolicySearchOptions opts;
  opts.starts = 4;
  const auto r = optimize_policy(spec, law, DiscreteBound::InnerS, opts);
  EXPECT_GE(r.value, grid_best - 1e-12);
  EXPECT_NEAR(r.value, grid_best, 0.01);
}

TEST(OptimizePolicy, TimeSharingNeverHurts) {
  const auto spec = adder_with_erasure(0.3);
  const auto law = joint_delayed_pmf(single_state(), 0, 0);
  const double levels[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  double best1 = 0.0, best2 = 0.0;
  auto p1 = InputPolicy::uniform(1, 1, 2, 2);
  auto p2 = InputPolicy::uniform(1, 2, 2, 2);
  for (double a : levels)
    for (double b : levels) {
      p1.x1_given = {a, 1 - a};
      p1.x2_given = {b, 1 - b};
      best1 = std::max(best1, inner_region_s(spec, law, p1).c);
      for (double c : levels)
        for (double d : levels) {
          p2.x1_given = {a, 1 - a, c, 1 - c};
          p2.x2_given = {b, 1 - b, d, 1 - d};
          best2 = std::max(best2, inner_region_s(spec, law, p2).c);
        }
    }
  EXPECT_LE(best1, best2 + 1e-12);
}

TEST(OptimizePolicy, ZChannelMatchesCapacityOracle) {
  const double flip = 0.3;
  const auto spec = z_channel(flip);
  const double cap = oracle::blahut_arimoto({{1.0, 0.0}, {flip, 1.0 - flip}});
  const auto r = optimize_policy(spec, joint_delayed_pmf(single_state(), 0, 0), DiscreteBound::InnerS, {});
  EXPECT_NEAR(r.value, cap, 0.005);
  EXPECT_LT(r.policy.x1_given[1], 0.5);
}

TEST(OptimizePolicy, XorNoEavesdropperMatchesCapacityOracle) {
  const auto spec = xor_bsc_channel({0.1, 0.3}, 0.5);
  const auto chain = build_gilbert_elliott(0.2, 0.1);
  const auto pi = steady_state(chain).pi;
  double cap = 0.0;
  for (int s = 0; s < 2; ++s) {
    const double p = s == 0 ? 0.1 : 0.3;
    std::vector<std::vector<double>> w;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) w.push_back((a ^ b) ? std::vector{p, 1 - p} : std::vector{1 - p, p});
    cap += pi(s) * oracle::blahut_arimoto(w);
  }
  EXPECT_NEAR(cap, pi(0) * (1 - h2(0.1)) + pi(1) * (1 - h2(0.3)), 1e-9);
  PolicySearchOptions opts;
  opts.starts = 3;
  const auto r = optimize_policy(spec, chain, 0, 0, DiscreteBound::InnerS, opts);
  EXPECT_NEAR(r.value, cap, 0.005);
}

TEST(OptimizePolicy, SingleLetterAlphabets) {
  auto spec = DiscreteChannelSpec::zeros({1, 1, 1, 1, 1});
  spec.kernel = {1.0};
  const auto r = optimize_policy(spec, joint_delayed_pmf(single_state(), 0, 0), DiscreteBound::InnerSf, {});
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.policy, InputPolicy::uniform(1, 1, 1, 1));
}

TEST(OptimizePolicy, DeterministicForSeed) {
  const auto spec = xor_bsc_channel({0.1, 0.3}, 0.2);
  const auto chain = build_gilbert_elliott(0.05, 0.05);
  PolicySearchOptions opts;
  opts.q_size = 2;
  opts.starts = 3;
  opts.refine_iters = 10;
  opts.seed = 99;
  const auto a = optimize_policy(spec, chain, 2, 1, DiscreteBound::InnerS, opts);
  const auto b = optimize_policy(spec, chain, 2, 1, DiscreteBound::InnerS, opts);
  EXPECT_EQ(a.policy, b.policy);
  EXPECT_EQ(a.value, b.value);
}
