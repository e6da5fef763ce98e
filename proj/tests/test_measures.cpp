#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "nbspec/district_tree.hpp"
#include "nbspec/error.hpp"
#include "nbspec/measures.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/path_space.hpp"
#include "nbspec/spectral.hpp"
#include "test_support.hpp"

using namespace nbspec;
using namespace nbspec::testing;

namespace {

std::shared_ptr<const DistrictTree> tree_of(const std::string& name, int depth) {
  return std::make_shared<const DistrictTree>(corpus(name), depth);
}

Mat eigenbasis(const Graph& g, cplx z) {
  const Mat s = turn_sum(g).matrix;
  return null_space(s - z * Mat::Identity(s.rows(), s.cols()), 1e-8);
}

cplx c3_root() { return std::polar(1.0, 2.0943951023931957); }

}  // namespace

TEST(EigenMeasure, K4Perron) {
  auto tree = tree_of("k4", 6);
  auto mu = measure_from_edge_function(tree, Vec::Ones(12), 2.0, 6);
  for (int n = 1; n <= 6; ++n) {
    for (int i = 0; i < tree->size(n); ++i) EXPECT_EQ(mu.value(n, i), std::pow(2.0, 1 - n));
  }
  EXPECT_EQ(mu.additivity_residual(), 0.0);
  EXPECT_EQ(dual_eigen_residual(mu, 2.0), 0.0);
}

TEST(EigenMeasure, C3Complex) {
  auto tree = tree_of("c3", 6);
  const cplx z = c3_root();
  const Mat basis = eigenbasis(tree->graph(), z);
  ASSERT_EQ(basis.cols(), 2);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    auto mu = measure_from_edge_function(tree, basis.col(j), z, 6);
    for (int n = 1; n <= 6; ++n) {
      for (int i = 0; i < tree->size(n); ++i) {
        const cplx expected = std::pow(z, 1 - n) * basis(tree->graph().opposite(tree->last_edge(n, i)), j);
        EXPECT_LT(std::abs(mu.value(n, i) - expected), 1e-14);
      }
    }
    EXPECT_LE(mu.additivity_residual(), 1e-12);
    EXPECT_LE(dual_eigen_residual(mu, z), 1e-12);
  }
}

TEST(EigenMeasure, RejectsNonEigenFunction) {
  auto tree = tree_of("k4", 3);
  std::mt19937_64 rng(1);
  auto f = random_function(*tree, 1, rng);
  EXPECT_THROW(measure_from_edge_function(tree, f.values, 2.0, 3), Error);
  EXPECT_THROW(measure_from_edge_function(tree, Vec::Ones(5), 2.0, 3), Error);
}

TEST(EigenMeasure, AllCorpusEigenvaluesAtDepthSix) {
  for (const auto& name : corpus_names()) {
    auto tree = tree_of(name, 6);
    for (const auto& c : spectrum(turn_sum(tree->graph())).clusters) {
      const Mat basis = eigenbasis(tree->graph(), c.value);
      for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        auto mu = measure_from_edge_function(tree, basis.col(j), c.value, 6);
        EXPECT_LE(mu.additivity_residual(), 1e-10) << name;
        EXPECT_LE(dual_eigen_residual(mu, c.value), 1e-10) << name;
      }
    }
  }
}

TEST(DualTransfer, MatchesDefinition) {
  auto tree = tree_of("k23", 4);
  std::mt19937_64 rng(2);
  auto mu = random_measure(tree, 4, rng);
  auto lmu = dual_transfer_apply(mu);
  const Graph& g = tree->graph();
  for (int i = 0; i < tree->size(1); ++i) {
    cplx sum = 0;
    for (int a : g.successors(tree->first_edge(1, i))) sum += mu.value(1, a);
    EXPECT_LT(std::abs(lmu.value(1, i) - sum), 1e-14);
  }
  for (int n = 2; n <= 4; ++n) {
    for (int i = 0; i < tree->size(n); ++i) {
      EXPECT_EQ(lmu.value(n, i), mu.value(n - 1, tree->tail(n, i)));
    }
  }
  EXPECT_LE(lmu.additivity_residual(), 1e-12);
}

TEST(DualTransfer, K4EigenRelation) {
  auto tree = tree_of("k4", 6);
  auto mu = measure_from_edge_function(tree, Vec::Ones(12), 2.0, 6);
  auto lmu = dual_transfer_apply(mu);
  for (int n = 1; n <= 6; ++n) EXPECT_LT(max_abs(lmu.level(n) - 2.0 * mu.level(n)), 1e-15);
}

TEST(DualTransfer, EigenspaceDimensionMatchesTransposedTransfer) {
  // On depth-3 leaves the dual transfer is the transpose of the square
  // transfer matrix.
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    DistrictTree tree(g, 3);
    const Mat dual = transfer_matrix(tree, 3).matrix.transpose();
    for (const auto& c : spectrum(turn_sum(g)).clusters) {
      const Mat dn = null_space(dual - c.value * Mat::Identity(dual.rows(), dual.cols()), 1e-8);
      EXPECT_EQ(dn.cols(), c.geometric) << name << " z=" << c.value;
    }
  }
}

TEST(Pairing, Examples) {
  auto tree = tree_of("k4", 3);
  auto mu = measure_from_edge_function(tree, Vec::Ones(12), 2.0, 3);
  EXPECT_LT(std::abs(pairing({1, Vec::Ones(12)}, mu) - 12.0), 1e-14);
  EXPECT_EQ(pairing({2, Vec::Zero(tree->size(2))}, mu), cplx(0));
  EXPECT_THROW(pairing({4, Vec::Zero(1)}, mu), Error);

  std::mt19937_64 rng(3);
  auto nu = random_measure(tree, 3, rng);
  auto phi = random_function(*tree, 1, rng);
  const cplx at1 = pairing(phi, nu);
  EXPECT_LT(std::abs(pairing(lift(*tree, phi, 2), nu) - at1), 1e-12);
  EXPECT_LT(std::abs(pairing(lift(*tree, phi, 3), nu) - at1), 1e-12);
}

TEST(Duality, RandomPairs) {
  for (const auto& name : corpus_names()) {
    auto tree = tree_of(name, 5);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
      auto mu = random_measure(tree, 5, rng);
      auto phi = random_function(*tree, 4, rng);
      const cplx lhs = pairing(apply_transfer(*tree, phi), mu);
      const cplx rhs = pairing(phi, dual_transfer_apply(mu));
      EXPECT_LT(rel_gap(lhs, rhs), 1e-10) << name;
    }
    DependsFunction one{1, Vec::Ones(tree->size(1))};
    auto mu = random_measure(tree, 5, rng);
    EXPECT_LT(rel_gap(pairing(apply_transfer(*tree, lift(*tree, one, 2)), mu),
                      pairing(one, dual_transfer_apply(mu))),
              1e-12);
  }
}

TEST(Duality, LibraryCheck) {
  auto rep = transfer_duality_check(tree_of("k4", 6), 6, 50, 42);
  EXPECT_TRUE(rep.passed(1e-10));
  EXPECT_GT(rep.indicator_checks, 0);
}

TEST(CanonicalTranspose, Examples) {
  auto tree = tree_of("k4", 3);
  auto mu = measure_from_edge_function(tree, Vec::Ones(12), 2.0, 3);
  const Vec f = canonical_transpose(mu, 2.0);
  EXPECT_LT(max_abs(f - Vec::Ones(12)), 1e-15);
  EXPECT_LT(max_abs(turn_sum(tree->graph()).matrix * f - 2.0 * f), 1e-15);

  std::mt19937_64 rng(5);
  auto random = random_measure(tree, 3, rng);
  EXPECT_THROW(canonical_transpose(random, 2.0), Error);
}

TEST(CanonicalTranspose, RoundTripsOnC3) {
  auto tree = tree_of("c3", 6);
  const cplx z = c3_root();
  const Mat basis = eigenbasis(tree->graph(), z);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    const Vec f = basis.col(j);
    auto mu = measure_from_edge_function(tree, f, z, 6);
    EXPECT_LT(max_abs(canonical_transpose(mu, z) - f), 1e-12);
    auto again = measure_from_edge_function(tree, canonical_transpose(mu, z), z, 6);
    for (int n = 1; n <= 6; ++n) EXPECT_LT(max_abs(again.level(n) - mu.level(n)), 1e-12);
  }
}

TEST(MeasureTable, JsonRoundTrip) {
  auto tree = tree_of("k23", 3);
  std::mt19937_64 rng(6);
  auto mu = random_measure(tree, 3, rng);
  auto back = MeasureTable::from_json(tree, mu.to_json());
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(back.level(n), mu.level(n));
  EXPECT_EQ(mu.to_json()["depth"], 3);
}

TEST(MeasureTable, FromLeavesIsAdditive) {
  auto tree = tree_of("petersen", 4);
  Vec leaves = Vec::Ones(tree->size(4));
  auto mu = MeasureTable::from_leaves(tree, 4, leaves);
  EXPECT_EQ(mu.additivity_residual(), 0.0);
  for (int i = 0; i < tree->size(1); ++i) EXPECT_EQ(mu.value(1, i), cplx(8.0));
}

TEST(EdgeForm, SymmetrizesTurnSum) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    const Mat p = edge_form(g);
    const Mat s = turn_sum(g).matrix;
    EXPECT_EQ(s.transpose() * p, p * s) << name;
    std::mt19937_64 rng(7);
    EXPECT_LE(edge_form_symmetry_residual(g, 20, rng), 1e-12);
  }
}

TEST(Degeneracy, K4Perron) {
  auto v = degeneracy_test(corpus("k4"), 2.0);
  EXPECT_EQ(v.dimension, 1);
  EXPECT_EQ(v.gram_rank, 1);
  EXPECT_FALSE(v.degenerate);
  EXPECT_EQ(v.jordan_block, 1);
  EXPECT_TRUE(v.agrees);
}

TEST(Degeneracy, CorpusAgreesWithJordan) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    for (const auto& c : spectrum(turn_sum(g)).clusters) {
      auto v = degeneracy_test(g, c.value);
      EXPECT_TRUE(v.agrees) << name << " z=" << c.value;
      EXPECT_EQ(v.dimension, c.geometric);
      EXPECT_LE(v.form_residual, 1e-10);
    }
  }
}

TEST(Degeneracy, PlantedTwoByTwoBlock) {
  AdjointPair pair;
  pair.lambda = cplx(0.3, 0.2);
  pair.blocks = {2};
  Mat j = Mat::Zero(3, 3);
  j(0, 0) = j(1, 1) = pair.lambda;
  j(0, 1) = 1.0;
  j(2, 2) = -1.0;
  Mat p(3, 3);
  p << 1, 2, 0, 0, 1, 1, 1, 0, 3;
  pair.a = p * j * p.inverse();
  Mat m(3, 3);
  m << 2, cplx(0, 1), 0, 0, 1, 0.5, 1, 0, 1;
  pair.m = m;
  pair.a_dual = m.inverse() * pair.a.transpose() * m;
  auto v = synthetic_degeneracy(pair);
  EXPECT_EQ(v.jordan, 2);
  EXPECT_EQ(v.jordan_dual, 2);
  EXPECT_TRUE(v.degenerate_on_eigen());
  EXPECT_FALSE(v.degenerate_on_generalized());
}

TEST(Degeneracy, PlantedPairsAreAdjoint) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    auto pair = make_planted_pair(rng);
    const Eigen::Index d = pair.a.rows();
    Vec phi(d), mu(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      phi[i] = cplx(n(rng), n(rng));
      mu[i] = cplx(n(rng), n(rng));
    }
    const cplx lhs = (pair.m * mu).transpose() * (pair.a * phi);
    const cplx rhs = (pair.m * (pair.a_dual * mu)).transpose() * phi;
    EXPECT_LT(rel_gap(lhs, rhs), 1e-10);
    auto v = synthetic_degeneracy(pair);
    EXPECT_EQ(v.jordan, pair.max_block());
    EXPECT_EQ(v.degenerate_on_eigen(), pair.max_block() > 1);
    EXPECT_FALSE(v.degenerate_on_generalized());
  }
}

TEST(ExtensionBound, HoldsAboveThreshold) {
  for (const auto& name : corpus_names()) {
    auto tree = tree_of(name, 4);
    const Graph& g = tree->graph();
    std::mt19937_64 rng(9);
    for (const auto& c : spectrum(turn_sum(g)).clusters) {
      if (std::abs(c.value) <= 0.25 * g.q_max()) continue;
      const Mat basis = eigenbasis(g, c.value);
      auto mu = measure_from_edge_function(tree, basis.col(0), c.value, 4);
      auto rep = extension_bound_check(mu, c.value, 0.25, 4, 20, rng);
      EXPECT_EQ(rep.violations, 0) << name << " z=" << c.value << " ratio " << rep.worst_ratio;
    }
    auto mu = random_measure(tree, 4, rng);
    EXPECT_THROW(extension_bound_check(mu, 0.1, 0.25, 4, 1, rng), Error);
  }
}
