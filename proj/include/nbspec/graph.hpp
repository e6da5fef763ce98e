#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace nbspec {

struct OrientedEdge {
  int init;
  int term;

  friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
};

/// A pair (from, to) of oriented edges with term(from) = init(to) and
/// from != op(to): the path may continue from `from` into `to`.
struct Turn {
  int from;
  int to;
};

/// A postal code: a nonempty non-backtracking sequence of oriented-edge
/// indices.
using Code = std::vector<int>;

/// Simple connected graph without vertices of degree < 2.
///
/// Oriented edges are stored in lexicographic (init, term) order; every matrix
/// basis in the library inherits this order. The graph is immutable after
/// construction.
class Graph {
 public:
  /// Validates and builds the graph. Vertex ids must already be 0..n-1; use
  /// load_graph() for arbitrary ids.
  static Graph from_edges(std::span<const std::pair<int, int>> edges,
                          std::vector<int> original_ids = {});

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int undirected_edge_count() const { return edge_count() / 2; }

  const OrientedEdge& edge(int e) const { return edges_[e]; }
  int init(int e) const { return edges_[e].init; }
  int term(int e) const { return edges_[e].term; }
  int opposite(int e) const { return opposite_[e]; }

  int degree(int v) const { return degree_[v]; }
  int q(int v) const { return degree_[v] - 1; }
  int q_max() const { return q_max_; }
  int q_min() const { return q_min_; }
  bool is_regular() const { return q_max_ == q_min_; }

  /// Edges with init(e) = v, ascending.
  std::span<const int> outgoing(int v) const;
  /// Edges with term(e) = v, ascending.
  std::span<const int> incoming(int v) const;
  /// All a with e ⌢ a, ascending.
  std::span<const int> successors(int e) const;
  /// All a with a ⌢ e, ascending.
  std::span<const int> predecessors(int e) const;

  std::optional<int> find_edge(int u, int v) const;
  bool is_turn(int from, int to) const;
  bool is_code(std::span<const int> edges) const;

  /// Original vertex label for each internal vertex id.
  const std::vector<int>& original_ids() const { return original_ids_; }

 private:
  Graph() = default;

  int vertex_count_ = 0;
  int q_max_ = 0;
  int q_min_ = 0;
  std::vector<OrientedEdge> edges_;
  std::vector<int> opposite_;
  std::vector<int> degree_;
  std::vector<int> original_ids_;
  // CSR-style adjacency: offsets into flat index arrays.
  std::vector<int> out_offset_, out_edges_;
  std::vector<int> in_offset_, in_edges_;
  std::vector<int> succ_offset_, succ_edges_;
  std::vector<int> pred_offset_, pred_edges_;
};

/// Parses an edge list ("u v" per line, '#' comments, blank lines ignored),
/// reindexes vertex ids to 0..n-1 in ascending label order and validates.
Graph load_graph(std::string_view text);
Graph load_graph_file(const std::filesystem::path& path);

/// All a with a ⌢ e. Cardinality is q(init(e)).
std::vector<int> turns_into(const Graph& g, int e);

}  // namespace nbspec
