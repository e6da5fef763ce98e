#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nbspec/graph.hpp"

namespace nbspec {

/// All postal codes of lengths 1..depth, stored level by level in
/// lexicographic order of their edge sequences.
///
/// Because oriented edges are ordered by init vertex and children of a code
/// are appended in ascending successor order, every district (codes sharing a
/// prefix) and every island (codes sharing the initial vertex) is a
/// contiguous index range at each level.
class DistrictTree {
 public:
  static constexpr int kMaxDepth = 6;
  static constexpr int kMaxLevelSize = 20000;

  DistrictTree(const Graph& g, int depth);

  const Graph& graph() const { return graph_; }
  int depth() const { return static_cast<int>(levels_.size()); }

  /// |W_n|.
  int size(int n) const { return static_cast<int>(level(n).parent.size()); }

  std::span<const int> code(int n, int i) const;
  Code code_vector(int n, int i) const;
  int first_edge(int n, int i) const { return level(n).codes[static_cast<std::size_t>(i) * n]; }
  int last_edge(int n, int i) const {
    return level(n).codes[static_cast<std::size_t>(i) * n + n - 1];
  }
  int island(int n, int i) const { return graph_.init(first_edge(n, i)); }

  /// Index in W_{n-1} of the code with the last edge dropped (-1 at n = 1).
  int parent(int n, int i) const { return level(n).parent[i]; }
  /// Index in W_{n-1} of the code with the first edge dropped (-1 at n = 1).
  int tail(int n, int i) const { return level(n).tail[i]; }
  /// Half-open range of the one-digit forward extensions in W_{n+1}.
  std::pair<int, int> children(int n, int i) const;

  /// Index in W_{n} of `code`, where n = code.size().
  std::optional<int> find(std::span<const int> code) const;
  /// Index in W_{n+1} of e ⌢ (code i of W_n); nullopt if not a turn.
  std::optional<int> prepend(int e, int n, int i) const;

 private:
  struct Level {
    std::vector<int> codes;  // flat, n entries per code
    std::vector<int> parent;
    std::vector<int> tail;
    std::vector<int> child_begin;  // size+1 offsets into the next level
  };

  const Level& level(int n) const { return levels_[n - 1]; }

  Graph graph_;
  std::vector<Level> levels_;
};

/// Builds the tree of all codes up to length n.
DistrictTree enumerate_codes(const Graph& g, int n);

}  // namespace nbspec
