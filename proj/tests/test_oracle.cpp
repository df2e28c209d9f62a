#include <gtest/gtest.h>

#include "mf/classifier.hpp"
#include "mf/error.hpp"
#include "mf/oracle.hpp"
#include "support.hpp"

using namespace mf;

namespace {

Rational q(long num, unsigned long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

TEST(Rational, QuantizeRoundsToNearest) {
  EXPECT_EQ(quantize(0.5, default_denominator()), q(1, 2));
  EXPECT_EQ(quantize(0.2, 10), q(1, 5));
  EXPECT_EQ(quantize(0.25, 2), q(1, 2));  // tie, away from zero
  EXPECT_EQ(quantize(-0.25, 2), q(-1, 2));
  EXPECT_EQ(quantize(0.24, 2), q(0, 1));
  EXPECT_EQ(quantize(1.0 / 3, 3), q(1, 3));
}

TEST(Rational, StringRoundTrip) {
  EXPECT_EQ(to_string(q(-3, 12)), "-1/4");
  EXPECT_EQ(to_string(q(4, 2)), "2");
  EXPECT_EQ(rational_from_string("6/8"), q(3, 4));
  EXPECT_THROW(rational_from_string("1/0"), std::invalid_argument);
  EXPECT_THROW(rational_from_string("abc"), std::invalid_argument);
}

TEST(Rational, EliminationByHand) {
  // Rows: x + y + z = 1, 2x + 2y + 2z = 2, x - z = 0.
  RationalMatrix m{{1, 1, 1}, {2, 2, 2}, {1, 0, -1}};
  EXPECT_EQ(rank(m), 2u);
  auto r = m;
  EXPECT_EQ(rref(r), (std::vector<std::size_t>{0, 1}));
  const auto null = nullspace(m, 3);
  ASSERT_EQ(null.size(), 1u);
  EXPECT_EQ(null[0], (RationalVector{1, -2, 1}));
  const auto x = solve(m, {1, 2, 0}, 3);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ((*x)[0] + (*x)[1] + (*x)[2], 1);
  EXPECT_EQ((*x)[0], (*x)[2]);
  EXPECT_FALSE(solve(m, {1, 3, 0}, 3).has_value());
}

TEST(RationalProperty, NullspaceVectorsAreAnnihilated) {
  test::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 6;
    RationalMatrix m(rows, RationalVector(cols));
    for (auto& row : m)
      for (auto& x : row) x = static_cast<long>(rng() % 5) - 2;
    const auto null = nullspace(m, cols);
    EXPECT_EQ(null.size() + rank(m), cols);
    for (const auto& v : null)
      for (const auto& row : m) {
        Rational s = 0;
        for (std::size_t c = 0; c < cols; ++c) s += row[c] * v[c];
        EXPECT_EQ(s, 0);
      }
  }
}

TEST(Oracle, SystemTransposeIsAdjoint) {
  const auto chain = random_chain(test::five_vertex_tree(), GridSpec::uniform(4, 2), 3);
  const auto sys = marginal_system(chain);
  test::Rng rng(1);
  RationalVector x(static_cast<std::size_t>(sys.cells)), y(static_cast<std::size_t>(sys.rows));
  for (auto& v : x) v = static_cast<long>(rng() % 7);
  for (auto& v : y) v = static_cast<long>(rng() % 7) - 3;
  const auto ax = apply_system(sys, x), aty = apply_transpose(sys, y);
  Rational l = 0, r = 0;
  for (std::size_t i = 0; i < y.size(); ++i) l += ax[i] * y[i];
  for (std::size_t i = 0; i < x.size(); ++i) r += x[i] * aty[i];
  EXPECT_EQ(l, r);
}

TEST(OracleProperty, CommonDensityChainsAreFeasibleWithExactWitness) {
  test::Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const auto g = test::random_graph(n, 1 + rng() % 5, rng);
    const auto chain = random_chain(g, GridSpec::uniform(n, 2), rng());
    const auto r = lp_feasible(chain);
    ASSERT_TRUE(r.feasible());
    EXPECT_TRUE(verify_witness(marginal_system(chain), r.witness, r.rhs));
    const auto w = witness_tensor(chain, r);
    for (const auto& m : chain.members())
      EXPECT_LT(test::sup_diff(marginalize(w, chain.grid(), m.type).values, m.values), 1e-9);
  }
}

TEST(Oracle, IsDeterministic) {
  const auto chain = random_chain(test::quantum_only_set(), GridSpec::uniform(3, 2), 8);
  const auto a = lp_feasible(chain), b = lp_feasible(chain);
  EXPECT_EQ(a.pivots, b.pivots);
  EXPECT_EQ(a.witness, b.witness);
  EXPECT_EQ(a.dependent_rows, b.dependent_rows);
}

TEST(Oracle, CellCapIsEnforced) {
  const auto chain = random_chain(test::quantum_only_set(), GridSpec::uniform(3, 2), 8);
  LpOptions opts;
  opts.cell_cap = 32;
  EXPECT_THROW(lp_feasible(chain, opts), CellCapExceeded);
}

TEST(Oracle, InconsistentChainIsRejected) {
  const auto grid = GridSpec::uniform(2, 2);
  const auto chain = random_chain(test::graph_of(2, {"12", "1'2"}), grid, 3);
  auto members = chain.members();
  auto& v = members[1].values.values();
  v[0] += 0.05;
  v[1] -= 0.05;
  v = v.cwiseMax(0.0);
  v /= v.sum();
  EXPECT_THROW(lp_feasible(Chain(grid, members, 1e-6)), IncompatibleChain);
}

// Connected proper trees are fully admissible, so quantum chains on them
// must always be feasible.
TEST(OracleProperty, QuantumChainsOnProperTreesAreFeasible) {
  test::Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const auto g = test::random_proper_tree(n, 2 + rng() % static_cast<std::uint64_t>(n), rng);
    const auto chain = quantum_chain(random_wavefunction(std::vector<Index>(static_cast<std::size_t>(n), 2), rng()), g);
    EXPECT_TRUE(lp_feasible(chain).feasible()) << trial;
  }
}

TEST(SignChain, ChainIsCompatibleButInfeasible) {
  for (int k : {3, 4}) {
    const auto chain = lemma3_chain(k);
    EXPECT_EQ(chain.size(), static_cast<std::size_t>(k));
    EXPECT_TRUE(check_compatibility(chain).compatible);
    const auto r = lp_feasible(chain);
    EXPECT_FALSE(r.feasible());
    EXPECT_TRUE(verify_certificate(marginal_system(chain), r.certificate, r.rhs));
  }
}

TEST(SignChain, ReducedDistributionsOnTheSignGrid) {
  const auto chain = lemma3_chain(3);
  const auto& m = chain.member(parse_type("1'23", 3));  // (p1, q2, q3)
  const Index zero[] = {0, 0, 0}, mixed[] = {1, 0, 1};
  EXPECT_EQ(m.values.at(zero), 0.0);  // q2 = q3 = -1
  EXPECT_EQ(m.values.at(mixed), 0.25);
  const auto& n = chain.member(parse_type("12'3", 3));  // (q1, p2, q3)
  EXPECT_EQ(n.values.at(zero), 0.25);
  EXPECT_EQ(chain.grid().axis(0).q.front(), -1.0);
}

TEST(SignChain, NonUniformMomentumFactorsStayInfeasible) {
  std::vector<Eigen::VectorXd> gammas{Eigen::Vector3d(0.2, 0.3, 0.5), Eigen::Vector2d(0.75, 0.25),
                                      Eigen::Vector2d(0.5, 0.5)};
  const auto chain = lemma3_chain(3, gammas);
  EXPECT_TRUE(check_compatibility(chain).compatible);
  EXPECT_FALSE(lp_feasible(chain).feasible());
}

TEST(SignChain, CertificateCoefficients) {
  const auto c3 = lemma3_certificate(3);
  // -(2 + lambda)/8 and (lambda - 2)/8.
  EXPECT_EQ(c3.first.constant, q(-2, 8));
  EXPECT_EQ(c3.first.slope, q(-1, 8));
  EXPECT_EQ(c3.second.constant, q(-2, 8));
  EXPECT_EQ(c3.second.slope, q(1, 8));
  EXPECT_EQ(c3.sum, q(-1, 2));
  for (int k = 3; k <= 8; ++k) {
    const auto c = lemma3_certificate(k);
    EXPECT_EQ(c.sum, q(-4, 1ul << k)) << k;
    EXPECT_EQ(c.family_dimension, 1u);
    EXPECT_EQ(c.system_rank, (std::size_t{1} << k) - 1);
    EXPECT_TRUE(c.family_verified);
    EXPECT_EQ(c.first.slope + c.second.slope, 0);
  }
}

TEST(SignChain, RejectsSmallK) {
  EXPECT_THROW(lemma3_chain(2), std::invalid_argument);
  EXPECT_THROW(lemma3_chain(1), std::invalid_argument);
  EXPECT_THROW(lemma3_certificate(2), std::invalid_argument);
  EXPECT_THROW(lemma3_chain(3, {Eigen::Vector2d(0.5, 0.5)}), std::invalid_argument);
}

TEST(JReduce, AllAxesIsIdentity) {
  const auto chain = random_chain(test::five_vertex_tree(), GridSpec::uniform(4, 2), 5);
  const auto r = j_reduce(chain, {0, 1, 2, 3});
  ASSERT_EQ(r.size(), chain.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    EXPECT_EQ(r.members()[i].values.values(), chain.members()[i].values.values());
}

TEST(JReduce, QuartetSetReducesToTheSquare) {
  const auto chain = random_chain(test::quartet_set(), GridSpec::uniform(4, 2), 6);
  const auto r = j_reduce(chain, {0, 1});
  EXPECT_EQ(r.graph(), test::graph_of(2, {"12", "1'2", "1'2'", "12'"}));
  EXPECT_EQ(classify(r.graph()).verdict, Verdict::NonAdmissible);
  const auto& m = chain.member(parse_type("1'234", 4));
  EXPECT_LT(test::sup_diff(r.member(parse_type("1'2", 2)).values, sum_onto(m.values, {4, 1})), 1e-15);
  EXPECT_THROW(j_reduce(chain, {1, 0}), std::invalid_argument);
}

TEST(JReduce, MergesTypesThatCoincide) {
  const auto chain = random_chain(test::graph_of(3, {"123", "123'", "1'23"}), GridSpec::uniform(3, 2), 7);
  const auto r = j_reduce(chain, {0, 1});
  EXPECT_EQ(r.size(), 2u);
}

// A J-reduced chain that is infeasible certifies the original.
TEST(JReduceProperty, InfeasibilityLiftsFromReductions) {
  const auto chain = lemma3_chain(4);
  const bool orig = lp_feasible(chain).feasible();
  for (const std::vector<int>& axes : {std::vector<int>{0, 1, 2}, {1, 2, 3}, {0, 2, 3}}) {
    const auto r = j_reduce(chain, axes);
    if (!lp_feasible(r).feasible()) EXPECT_FALSE(orig);
  }
  test::Rng rng(9);
  for (int trial = 0; trial < 15; ++trial) {
    const auto c = random_chain(test::random_graph(3, 2 + rng() % 4, rng), GridSpec::uniform(3, 2), rng());
    std::vector<int> axes;
    for (int i = 0; i < 3; ++i)
      if (rng() & 1u) axes.push_back(i);
    if (axes.empty()) axes.push_back(0);
    EXPECT_TRUE(lp_feasible(j_reduce(c, axes)).feasible());
  }
}
