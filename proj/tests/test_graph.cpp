#include <gtest/gtest.h>

#include <map>

#include "nbspec/district_tree.hpp"
#include "nbspec/error.hpp"
#include "nbspec/graph.hpp"
#include "test_support.hpp"

using namespace nbspec;
using namespace nbspec::testing;

namespace {

ErrorCode load_error(const std::string& text) {
  try {
    load_graph(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(LoadGraph, Triangle) {
  auto g = load_graph("0 1\n1 2\n2 0");
  EXPECT_EQ(g.vertex_count(), 3);
  EXPECT_EQ(g.edge_count(), 6);
  for (int v = 0; v < 3; ++v) EXPECT_EQ(g.q(v), 1);
}

TEST(LoadGraph, CompleteGraphK4) {
  auto g = corpus("k4");
  EXPECT_EQ(g.vertex_count(), 4);
  EXPECT_EQ(g.edge_count(), 12);
  for (int v = 0; v < 4; ++v) EXPECT_EQ(g.q(v), 2);
  EXPECT_TRUE(g.is_regular());
}

TEST(LoadGraph, OrientedEdgesSortedAndDoubled) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    EXPECT_EQ(g.edge_count(), 2 * g.undirected_edge_count());
    for (int e = 1; e < g.edge_count(); ++e) {
      EXPECT_LT(std::pair(g.init(e - 1), g.term(e - 1)), std::pair(g.init(e), g.term(e)));
    }
  }
}

TEST(LoadGraph, OppositeIsFreeInvolution) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    for (int e = 0; e < g.edge_count(); ++e) {
      EXPECT_NE(g.opposite(e), e);
      EXPECT_EQ(g.opposite(g.opposite(e)), e);
      EXPECT_EQ(g.init(g.opposite(e)), g.term(e));
      EXPECT_NE(g.init(e), g.term(e));
    }
  }
}

TEST(LoadGraph, DistinctDiagnostics) {
  EXPECT_EQ(load_error("0 1\n1 2"), ErrorCode::TerminalVertex);
  EXPECT_EQ(load_error("0 1\n1 1\n1 2\n2 0"), ErrorCode::LoopEdge);
  EXPECT_EQ(load_error("0 1\n1 2\n2 0\n1 0"), ErrorCode::DuplicateEdge);
  EXPECT_EQ(load_error("0 1\n1 2\n2 0\n3 4\n4 5\n5 3"), ErrorCode::Disconnected);
  EXPECT_EQ(load_error("0 x\n"), ErrorCode::Parse);
  EXPECT_EQ(load_error("0 1 2\n"), ErrorCode::Parse);
  EXPECT_EQ(load_error("-1 2\n"), ErrorCode::Parse);
  EXPECT_EQ(load_error("# only a comment\n\n"), ErrorCode::Parse);
}

TEST(LoadGraph, FixtureFiles) {
  auto code_of = [](const std::string& name) {
    try {
      load_graph_file(fixture_path(name));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of("path"), ErrorCode::TerminalVertex);
  EXPECT_EQ(code_of("two_triangles"), ErrorCode::Disconnected);
  EXPECT_EQ(code_of("loop"), ErrorCode::LoopEdge);
  EXPECT_EQ(code_of("duplicate"), ErrorCode::DuplicateEdge);
}

TEST(LoadGraph, CommentsAndSparseIds) {
  auto g = load_graph_file(fixture_path("sparse_ids"));
  EXPECT_EQ(g.vertex_count(), 4);
  EXPECT_EQ(g.original_ids(), (std::vector<int>{10, 20, 30, 40}));
  auto h = load_graph("# header\n\n0 1  # trailing\n1 2\n\n2 0\n");
  EXPECT_EQ(h.vertex_count(), 3);
}

TEST(TurnsInto, MatchesBruteForce) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    for (int e = 0; e < g.edge_count(); ++e) {
      std::vector<int> expected;
      for (int a = 0; a < g.edge_count(); ++a) {
        if (g.term(a) == g.init(e) && g.init(a) != g.term(e)) expected.push_back(a);
      }
      EXPECT_EQ(turns_into(g, e), expected);
      EXPECT_EQ(static_cast<int>(expected.size()), g.q(g.init(e)));
    }
  }
}

TEST(TurnsInto, K23BySide) {
  auto g = corpus("k23");
  for (int e = 0; e < g.edge_count(); ++e) {
    const int expected = g.init(e) <= 1 ? 2 : 1;
    EXPECT_EQ(static_cast<int>(turns_into(g, e).size()), expected);
  }
  EXPECT_THROW(turns_into(g, g.edge_count()), Error);
}

TEST(TurnsInto, CycleHasUniquePredecessor) {
  auto g = corpus("c3");
  for (int e = 0; e < g.edge_count(); ++e) EXPECT_EQ(turns_into(g, e).size(), 1u);
}

TEST(EnumerateCodes, LevelSizes) {
  auto c3 = enumerate_codes(corpus("c3"), 3);
  EXPECT_EQ(c3.size(1), 6);
  EXPECT_EQ(c3.size(2), 6);
  EXPECT_EQ(c3.size(3), 6);
  auto k4 = enumerate_codes(corpus("k4"), 2);
  EXPECT_EQ(k4.size(1), 12);
  EXPECT_EQ(k4.size(2), 24);
  auto k23 = enumerate_codes(corpus("k23"), 2);
  EXPECT_EQ(k23.size(1), 12);
  EXPECT_EQ(k23.size(2), 18);
}

TEST(EnumerateCodes, MatchesWalkEnumeration) {
  for (const auto& name : corpus_names()) {
    auto g = corpus(name);
    const int depth = name == "petersen" ? 4 : 5;
    auto tree = enumerate_codes(g, depth);
    for (int n = 1; n <= depth; ++n) {
      std::vector<Code> expected;
      for (const auto& w : walks(g, n)) expected.push_back(walk_code(g, w));
      std::sort(expected.begin(), expected.end());
      ASSERT_EQ(tree.size(n), static_cast<int>(expected.size())) << name << " n=" << n;
      for (int i = 0; i < tree.size(n); ++i) {
        EXPECT_EQ(tree.code_vector(n, i), expected[i]);
        EXPECT_TRUE(g.is_code(tree.code(n, i)));
      }
    }
  }
}

TEST(EnumerateCodes, StructureMaps) {
  auto g = corpus("k23");
  auto tree = enumerate_codes(g, 4);
  for (int n = 2; n <= 4; ++n) {
    for (int i = 0; i < tree.size(n); ++i) {
      auto c = tree.code_vector(n, i);
      EXPECT_EQ(tree.code_vector(n - 1, tree.parent(n, i)), Code(c.begin(), c.end() - 1));
      EXPECT_EQ(tree.code_vector(n - 1, tree.tail(n, i)), Code(c.begin() + 1, c.end()));
      EXPECT_EQ(tree.find(c), i);
      EXPECT_EQ(tree.island(n, i), g.init(c.front()));
    }
  }
  for (int i = 0; i < tree.size(3); ++i) {
    auto [lo, hi] = tree.children(3, i);
    EXPECT_EQ(hi - lo, g.q(g.term(tree.last_edge(3, i))));
    for (int j = lo; j < hi; ++j) EXPECT_EQ(tree.parent(4, j), i);
  }
  EXPECT_FALSE(tree.find(Code{0, g.opposite(0)}).has_value());
  EXPECT_THROW(DistrictTree(g, 0), Error);
  EXPECT_THROW(DistrictTree(g, DistrictTree::kMaxDepth + 1), Error);
}
