#include <gtest/gtest.h>

#include "mf/error.hpp"
#include "mf/grid.hpp"
#include "support.hpp"

using namespace mf;

TEST(Grid, UniformPhaseTensorHasUniformMarginals) {
  const auto grid = GridSpec::uniform(3, 2, 3);
  PhaseTensor rho(grid.phase_vars(), grid.phase_dims());
  rho.values().setConstant(1.0 / static_cast<double>(rho.size()));
  for (std::uint64_t c = 0; c < 8; ++c) {
    const auto m = marginalize(rho, grid, AxisAssignment(3, c));
    const double expect = 1.0 / static_cast<double>(m.values.size());
    EXPECT_NEAR(m.values.values().maxCoeff(), expect, 1e-15);
    EXPECT_NEAR(m.values.values().minCoeff(), expect, 1e-15);
  }
}

TEST(Grid, ProductTensorMarginalsFactorize) {
  const auto grid = GridSpec::uniform(2, 2, 3);
  Eigen::Vector2d f1(0.3, 0.7), f2(0.6, 0.4);
  Eigen::Vector3d g1(0.2, 0.5, 0.3), g2(0.1, 0.1, 0.8);
  PhaseTensor rho(grid.phase_vars(), grid.phase_dims());
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b)
      for (Index c = 0; c < 3; ++c)
        for (Index d = 0; d < 3; ++d) {
          const Index idx[] = {a, b, c, d};
          rho.at(idx) = f1[a] * f2[b] * g1[c] * g2[d];
        }
  const auto m = marginalize(rho, grid, parse_type("1'2", 2));  // (p1, q2)
  for (Index c = 0; c < 3; ++c)
    for (Index b = 0; b < 2; ++b) {
      const Index idx[] = {c, b};
      EXPECT_NEAR(m.values.at(idx), g1[c] * f2[b], 1e-15);
    }
}

TEST(GridProperty, MarginalMatchesNestedSummation) {
  test::Rng rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto grid = GridSpec::uniform(n, 2 + static_cast<Index>(rng() % 3), 2 + static_cast<Index>(rng() % 2));
    const auto rho = random_phase_tensor(grid, rng());
    const auto type = test::random_vertex(n, rng);
    const auto m = marginalize(rho, grid, type);
    const auto oracle = test::nested_marginal(rho, grid, type);
    ASSERT_EQ(static_cast<std::size_t>(m.values.size()), oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(m.values[static_cast<Index>(i)], oracle[i], 1e-15);
  }
}

TEST(GridProperty, MarginalizationConservesMass) {
  test::Rng rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto grid = GridSpec::uniform(n, 2 + static_cast<Index>(rng() % 4));
    const auto rho = random_phase_tensor(grid, rng());
    const auto m = marginalize(rho, grid, test::random_vertex(n, rng));
    EXPECT_NEAR(m.values.values().sum(), rho.values().sum(), 1e-12);
  }
}

TEST(Grid, RandomPhaseTensorIsExactlyNormalizedDyadic) {
  const auto grid = GridSpec::uniform(2, 3);
  const auto rho = random_phase_tensor(grid, 5);
  EXPECT_EQ(rho.values().sum(), 1.0);
  for (Index i = 0; i < rho.size(); ++i) {
    EXPECT_GT(rho[i], 0.0);
    const double scaled = rho[i] * 4294967296.0;
    EXPECT_EQ(scaled, std::floor(scaled));
  }
}

TEST(Grid, RandomChainIsDeterministic) {
  const auto g = test::five_vertex_tree();
  const auto grid = GridSpec::uniform(4, 2);
  const auto a = random_chain(g, grid, 77), b = random_chain(g, grid, 77), c = random_chain(g, grid, 78);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.members()[i].values.values(), b.members()[i].values.values());
    EXPECT_NE(a.members()[i].values.values(), c.members()[i].values.values());
  }
}

TEST(Grid, SingletonRandomChain) {
  const auto chain = random_chain(test::graph_of(2, {"1'2"}), GridSpec::uniform(2, 3), 1);
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_NEAR(chain.members().front().values.values().sum(), 1.0, 1e-15);
}

TEST(GridProperty, RandomChainsAreCompatible) {
  test::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto g = test::random_graph(n, 1 + rng() % 6, rng);
    const auto chain = random_chain(g, GridSpec::uniform(n, 2), rng());
    const auto r = check_compatibility(chain, 1e-12);
    EXPECT_TRUE(r.compatible);
    EXPECT_EQ(r.pairs.size(), chain.size() * (chain.size() - 1) / 2);
  }
}

TEST(Grid, PerturbationIsReportedOnPairsSharingTheAxis) {
  const auto g = test::graph_of(2, {"12", "1'2", "12'"});
  const auto grid = GridSpec::uniform(2, 2);
  const auto chain = random_chain(g, grid, 9);
  auto members = chain.members();
  auto& v = members[0].values.values();  // type 12
  v[0] += 0.1;
  v /= v.sum();
  const Chain bad(grid, members);
  const auto r = check_compatibility(bad);
  EXPECT_FALSE(r.compatible);
  // Type 12 shares an axis with both other members; 1'2 and 12' share none
  // that the perturbation touches.
  for (const auto& p : r.pairs) {
    const bool touches = p.a == parse_type("12", 2) || p.b == parse_type("12", 2);
    if (touches) EXPECT_GT(p.deviation, 1e-3);
    else EXPECT_LT(p.deviation, 1e-12);
  }
}

TEST(Grid, IntegratedDistributionForSimpleAndCompositePairs) {
  const auto grid = GridSpec::uniform(3, 3);
  const auto g = test::graph_of(3, {"123", "1'23", "1'2'3'"});
  const auto chain = random_chain(g, grid, 4);
  const auto& a = chain.member(parse_type("123", 3));
  const auto& b = chain.member(parse_type("1'23", 3));
  const auto& c = chain.member(parse_type("1'2'3'", 3));
  const auto ab = integrated_distribution(grid, a, b);
  EXPECT_EQ(ab.vars(), (std::vector<Var>{1, 2}));
  EXPECT_EQ(test::sup_diff(ab, sum_onto(a.values, {1, 2})), 0.0);
  EXPECT_EQ(test::sup_diff(ab, sum_onto(b.values, {1, 2})), 0.0);
  const auto bc = integrated_distribution(grid, b, c);  // differ on axes 2, 3
  EXPECT_EQ(bc.vars(), (std::vector<Var>{3}));
  EXPECT_EQ(test::sup_diff(sum_onto(b.values, {3}), sum_onto(c.values, {3})), 0.0);
  EXPECT_LE(test::sup_diff(integrated_distribution(grid, c, b), bc), kCompatTolerance);
}

TEST(Grid, IntegratedDistributionRejectsDiscrepancy) {
  const auto grid = GridSpec::uniform(2, 2);
  const auto chain = random_chain(test::graph_of(2, {"12", "1'2"}), grid, 3);
  auto b = chain.member(parse_type("1'2", 2));
  b.values[0] += 0.2;
  b.values[1] -= std::min(0.2, b.values[1]);
  EXPECT_THROW(integrated_distribution(grid, chain.member(parse_type("12", 2)), b), IncompatibleChain);
}

TEST(Grid, ChainValidatesMembers) {
  const auto grid = GridSpec::uniform(2, 2);
  EXPECT_THROW(make_marginal(grid, parse_type("12", 2), Eigen::VectorXd::Constant(3, 1.0 / 3)), std::invalid_argument);
  auto m = make_marginal(grid, parse_type("12", 2), Eigen::VectorXd::Constant(4, 0.3));
  EXPECT_THROW(Chain(grid, {m}), std::invalid_argument);
  m.values.values() << 0.5, 0.5, 0.2, -0.2;
  EXPECT_THROW(Chain(grid, {m}), std::invalid_argument);
  EXPECT_THROW(GridSpec::uniform(2, 0), std::invalid_argument);
}
