#include <gtest/gtest.h>

#include <random>

#include "nbspec/error.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/spectral.hpp"
#include "test_support.hpp"

using namespace nbspec;
using namespace nbspec::testing;

namespace {

// Multiset match of two eigenvalue lists, greedy nearest neighbour.
double multiset_gap(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0;
  for (cplx x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](cplx u, cplx v) { return std::abs(u - x) < std::abs(v - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

int lu_rank(const Mat& a) {
  Eigen::FullPivLU<Mat> lu(a);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

// Jordan block size from the LU rank sequence of (A - z)^k.
int lu_jordan(const Mat& a, cplx z) {
  const Mat b = a - z * Mat::Identity(a.rows(), a.cols());
  Mat p = b;
  int prev = lu_rank(p);
  for (int k = 1;; ++k) {
    p = p * b;
    int r = lu_rank(p);
    if (r == prev) return k;
    prev = r;
  }
}

std::vector<std::int64_t> brute_piles(const Graph& g, int n_max) {
  std::vector<std::int64_t> out;
  for (int n = 1; n <= n_max; ++n) {
    // S^n 1 at e counts walks of n+1 edges ending in e.
    std::vector<std::int64_t> count(g.edge_count(), 0);
    for (const auto& w : walks(g, n + 1)) ++count[*g.find_edge(w[n], w[n + 1])];
    out.push_back(*std::max_element(count.begin(), count.end()));
  }
  return out;
}

}  // namespace

TEST(Spectrum, C3) {
  auto rep = spectrum(turn_sum(corpus("c3")));
  ASSERT_EQ(rep.clusters.size(), 3u);
  for (const auto& c : rep.clusters) {
    EXPECT_NEAR(std::abs(c.value), 1.0, 1e-12);
    EXPECT_LT(std::abs(std::pow(c.value, 3) - 1.0), 1e-12);
    EXPECT_EQ(c.algebraic, 2);
    EXPECT_EQ(c.geometric, 2);
  }
}

TEST(Spectrum, K4Exact) {
  auto rep = spectrum(turn_sum(corpus("k4")));
  const double s7 = std::sqrt(7.0);
  std::vector<std::pair<cplx, int>> expected = {
      {-1.0, 2}, {cplx(-0.5, -s7 / 2), 3}, {cplx(-0.5, s7 / 2), 3}, {1.0, 3}, {2.0, 1}};
  ASSERT_EQ(rep.clusters.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_LT(std::abs(rep.clusters[i].value - expected[i].first), 1e-8);
    EXPECT_EQ(rep.clusters[i].algebraic, expected[i].second);
    EXPECT_EQ(rep.clusters[i].max_block, 1);
  }
  EXPECT_NEAR(std::abs(expected[1].first), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(rep.dimension(), 12);
  EXPECT_NEAR(rep.spectral_radius(), 2.0, 1e-10);
}

TEST(Spectrum, K4Adjacency) {
  auto rep = spectrum(neighbor_sum(corpus("k4")));
  ASSERT_EQ(rep.clusters.size(), 2u);
  EXPECT_LT(std::abs(rep.clusters[0].value + 1.0), 1e-10);
  EXPECT_EQ(rep.clusters[0].algebraic, 3);
  EXPECT_LT(std::abs(rep.clusters[1].value - 3.0), 1e-10);
}

TEST(Spectrum, IharaBassCharacteristicPolynomial) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    const Mat s = turn_sum(g).matrix;
    const auto ev = eigenvalues(s);
    for (int k = 0; k < 5; ++k) {
      const cplx z(u(rng), u(rng));
      cplx product = 1;
      for (cplx w : ev) product *= z - w;
      const cplx direct = (z * Mat::Identity(s.rows(), s.cols()) - s).determinant();
      const cplx vertex_side = ihara_bass_charpoly(g, z);
      EXPECT_LT(rel_gap(product, vertex_side), 1e-8) << name;
      EXPECT_LT(rel_gap(direct, vertex_side), 1e-9) << name;
    }
  }
}

TEST(Spectrum, InvariantsOnCorpus) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    const Mat s = turn_sum(g).matrix;
    auto rep = spectrum(s);
    EXPECT_EQ(rep.dimension(), g.edge_count());
    for (const auto& c : rep.clusters) {
      EXPECT_LE(c.geometric, c.algebraic);
      EXPECT_GE(c.geometric, 1);
    }
    EXPECT_LT(multiset_gap(eigenvalues(s), eigenvalues(s.transpose())), 1e-6);
  }
}

TEST(Equalizer, K4Examples) {
  auto g = corpus("k4");
  EXPECT_EQ(equalizer_basis(neighbor_sum(g), rescale(g, 2.0)).cols(), 1);
  const cplx z0(-0.5, std::sqrt(7.0) / 2);
  EXPECT_LT(std::abs(z0 * z0 + z0 + 2.0), 1e-14);
  EXPECT_EQ(equalizer_basis(neighbor_sum(g), rescale(g, z0)).cols(), 3);
  EXPECT_EQ(equalizer_basis(neighbor_sum(g), rescale(g, cplx(0.37, 1.91))).cols(), 0);
  EXPECT_THROW(equalizer_basis(neighbor_sum(g), turn_sum(g)), Error);
}

TEST(JordanDetect, Examples) {
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 2.0, 2.0, 3.0;
  EXPECT_EQ(jordan_detect(d, 2.0), 1);
  const cplx lambda(0.4, -1.2);
  Mat j(2, 2);
  j << lambda, 1.0, 0.0, lambda;
  EXPECT_EQ(jordan_detect(j, lambda), 2);
  EXPECT_THROW(jordan_detect(d, 5.0), Error);
  const Mat s = turn_sum(corpus("k4")).matrix;
  EXPECT_EQ(jordan_detect(s, 1.0), lu_jordan(s, 1.0));
}

TEST(JordanDetect, RankOracleOnCorpus) {
  for (const auto& name : corpus_names()) {
    const Mat s = turn_sum(corpus(name)).matrix;
    for (const auto& c : spectrum(s).clusters) {
      EXPECT_EQ(c.max_block, lu_jordan(s, c.value)) << name << " z=" << c.value;
    }
  }
}

TEST(JordanDetect, HiddenBlockUnderSimilarity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat p(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 5; ++k) p(i, k) = cplx(n(rng), n(rng));
  Mat j = Mat::Zero(5, 5);
  j.diagonal() << 1.5, 1.5, 1.5, -0.3, 0.8;
  j(0, 1) = 1.0;
  j(1, 2) = 1.0;
  const Mat a = p * j * p.inverse();
  EXPECT_EQ(jordan_detect(a, 1.5), 3);
  EXPECT_EQ(generalized_eigenspace(a, 1.5, 3).cols(), 3);
  EXPECT_EQ(generalized_eigenspace(a, 1.5, 1).cols(), 1);
}

TEST(Correspondence, K4Perron) {
  auto r = correspondence_report(corpus("k4"), 2.0);
  EXPECT_EQ(r.dim_turn_eigenspace, 1);
  EXPECT_EQ(r.dim_vertex_equalizer, 1);
  EXPECT_LE(r.gradient_bijectivity_residual, 1e-10);
  EXPECT_LE(r.inverse_composition_residual, 1e-10);
  EXPECT_TRUE(r.passed);
  // (2 - 1/2)^-1 I G_2 1 = (2/3)(3/2) 1 = 1.
  auto g = corpus("k4");
  const Vec back = in_sum(g).matrix * twisted_gradient(g, 2.0).matrix * Vec::Ones(4) / (2.0 - 0.5);
  EXPECT_LT(max_abs(back - Vec::Ones(4)), 1e-15);
}

TEST(Correspondence, K4Complex) {
  auto r = correspondence_report(corpus("k4"), cplx(-0.5, std::sqrt(7.0) / 2));
  EXPECT_EQ(r.dim_turn_eigenspace, 3);
  EXPECT_EQ(r.dim_vertex_equalizer, 3);
  EXPECT_LE(r.gradient_bijectivity_residual, 1e-8);
  EXPECT_TRUE(r.passed);
}

TEST(Correspondence, AllAdmissibleEigenvalues) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    for (const auto& c : spectrum(turn_sum(g)).clusters) {
      if (is_excluded(c.value)) continue;
      auto r = correspondence_report(g, c.value);
      EXPECT_TRUE(r.passed) << name << " z=" << c.value;
      EXPECT_EQ(r.dim_turn_eigenspace, r.dim_vertex_equalizer);
      EXPECT_EQ(r.dim_vertex_equalizer,
                equalizer_basis(neighbor_avg(g), local_tweak(g, c.value)).cols());
    }
  }
}

TEST(Correspondence, GenericZHasNoEigenspace) {
  auto r = correspondence_report(corpus("petersen"), cplx(0.31, 0.77));
  EXPECT_EQ(r.dim_turn_eigenspace, 0);
  EXPECT_EQ(r.dim_vertex_equalizer, 0);
  EXPECT_TRUE(r.passed);
}

TEST(PileHeights, Examples) {
  auto k4 = pile_heights(corpus("k4"), 10);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(k4.heights[n - 1], std::int64_t{1} << n);
  EXPECT_NEAR(k4.radius, 2.0, 1e-10);
  auto c3 = pile_heights(corpus("c3"), 10);
  for (auto h : c3.heights) EXPECT_EQ(h, 1);
  EXPECT_NEAR(c3.radius, 1.0, 1e-10);
  auto k23 = pile_heights(corpus("k23"), 12);
  EXPECT_EQ(k23.heights[0], 2);
  EXPECT_EQ(k23.heights[1], 2);
  EXPECT_NEAR(k23.radius, std::sqrt(2.0), 1e-10);
  EXPECT_LE(k23.radius, 2 - 0.5);
}

TEST(PileHeights, BruteForceCounts) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    const int n_max = name == "petersen" ? 5 : 7;
    auto rep = pile_heights(g, n_max);
    EXPECT_EQ(rep.heights, brute_piles(g, n_max)) << name;
  }
}

TEST(PileHeights, Bounds) {
  for (const auto& name : corpus_names()) {
    auto rep = pile_heights(corpus(name), 12);
    EXPECT_TRUE(rep.submultiplicative) << name;
    EXPECT_TRUE(rep.bounded_below_by_radius) << name;
    EXPECT_TRUE(rep.deviation_shrinks) << name;
    for (int m = 1; m < 10; ++m) {
      for (int n = 1; m + n <= 10; ++n) {
        EXPECT_LE(rep.heights[m + n - 1], rep.heights[m - 1] * rep.heights[n - 1]);
      }
    }
  }
}

TEST(PileHeights, DeviationOscillatesOnK23) {
  // Odd lengths overshoot and even lengths hit R exactly, so the deviation
  // is not monotone even though it tends to zero.
  auto rep = pile_heights(corpus("k23"), 12);
  EXPECT_FALSE(rep.deviation_decreasing_last4);
  EXPECT_TRUE(rep.deviation_shrinks);
}

TEST(PileHeights, RegularityDichotomy) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    const double r = pile_heights(g, 12).radius;
    if (g.is_regular()) {
      EXPECT_NEAR(r, g.q_max(), 1e-10) << name;
    } else {
      EXPECT_LT(r, g.q_max() - 1e-6) << name;
    }
  }
}
