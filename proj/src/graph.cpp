#include "nbspec/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>

#include "nbspec/error.hpp"

namespace nbspec {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::LoopEdge: return "loop-edge";
    case ErrorCode::DuplicateEdge: return "duplicate-edge";
    case ErrorCode::TerminalVertex: return "terminal-vertex";
    case ErrorCode::Disconnected: return "disconnected";
    case ErrorCode::TooLarge: return "too-large";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::ShapeMismatch: return "shape-mismatch";
    case ErrorCode::ExcludedParameter: return "excluded-parameter";
    case ErrorCode::NotEigen: return "not-eigen";
    case ErrorCode::DepthTooShallow: return "depth-too-shallow";
    case ErrorCode::BaseMismatch: return "base-mismatch";
  }
  return "unknown";
}

namespace {

// Builds offsets/flat arrays from per-bucket lists.
void flatten(const std::vector<std::vector<int>>& buckets, std::vector<int>& offset,
             std::vector<int>& flat) {
  offset.assign(buckets.size() + 1, 0);
  flat.clear();
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    flat.insert(flat.end(), buckets[i].begin(), buckets[i].end());
    offset[i + 1] = static_cast<int>(flat.size());
  }
}

std::span<const int> slice(const std::vector<int>& offset, const std::vector<int>& flat,
                           int i) {
  return {flat.data() + offset[i], static_cast<std::size_t>(offset[i + 1] - offset[i])};
}

}  // namespace

Graph Graph::from_edges(std::span<const std::pair<int, int>> edges,
                        std::vector<int> original_ids) {
  if (edges.empty()) throw Error(ErrorCode::Parse, "graph has no edges");

  int n = 0;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0) throw Error(ErrorCode::Parse, "negative vertex id");
    n = std::max({n, u + 1, v + 1});
  }

  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u == v) {
      throw Error(ErrorCode::LoopEdge, "loop edge at vertex " + std::to_string(u));
    }
    auto key = std::minmax(u, v);
    if (!seen.insert({key.first, key.second}).second) {
      throw Error(ErrorCode::DuplicateEdge, "duplicate edge " + std::to_string(key.first) +
                                                " " + std::to_string(key.second));
    }
  }

  Graph g;
  g.vertex_count_ = n;
  if (original_ids.empty()) {
    original_ids.resize(n);
    for (int v = 0; v < n; ++v) original_ids[v] = v;
  }
  g.original_ids_ = std::move(original_ids);

  for (auto [u, v] : edges) {
    g.edges_.push_back({u, v});
    g.edges_.push_back({v, u});
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const OrientedEdge& a, const OrientedEdge& b) {
    return std::pair(a.init, a.term) < std::pair(b.init, b.term);
  });

  const int m = g.edge_count();
  g.degree_.assign(n, 0);
  std::vector<std::vector<int>> out(n), in(n);
  for (int e = 0; e < m; ++e) {
    ++g.degree_[g.edges_[e].init];
    out[g.edges_[e].init].push_back(e);
    in[g.edges_[e].term].push_back(e);
  }
  flatten(out, g.out_offset_, g.out_edges_);
  flatten(in, g.in_offset_, g.in_edges_);

  for (int v = 0; v < n; ++v) {
    if (g.degree_[v] <= 1) {
      throw Error(ErrorCode::TerminalVertex,
                  "terminal vertex " + std::to_string(g.original_ids_[v]) + " has degree " +
                      std::to_string(g.degree_[v]));
    }
  }

  // Connectivity by BFS from vertex 0.
  std::vector<char> reached(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  reached[0] = 1;
  int count = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int e : slice(g.out_offset_, g.out_edges_, v)) {
      int w = g.edges_[e].term;
      if (!reached[w]) {
        reached[w] = 1;
        ++count;
        frontier.push(w);
      }
    }
  }
  if (count != n) {
    throw Error(ErrorCode::Disconnected, "graph is disconnected: " + std::to_string(count) +
                                             " of " + std::to_string(n) +
                                             " vertices reachable from vertex " +
                                             std::to_string(g.original_ids_[0]));
  }

  g.opposite_.resize(m);
  for (int e = 0; e < m; ++e) g.opposite_[e] = *g.find_edge(g.edges_[e].term, g.edges_[e].init);

  std::vector<std::vector<int>> succ(m), pred(m);
  for (int e = 0; e < m; ++e) {
    for (int a : slice(g.out_offset_, g.out_edges_, g.edges_[e].term)) {
      if (a != g.opposite_[e]) {
        succ[e].push_back(a);
        pred[a].push_back(e);
      }
    }
  }
  for (auto& p : pred) std::sort(p.begin(), p.end());
  flatten(succ, g.succ_offset_, g.succ_edges_);
  flatten(pred, g.pred_offset_, g.pred_edges_);

  g.q_max_ = *std::max_element(g.degree_.begin(), g.degree_.end()) - 1;
  g.q_min_ = *std::min_element(g.degree_.begin(), g.degree_.end()) - 1;
  return g;
}

std::span<const int> Graph::outgoing(int v) const { return slice(out_offset_, out_edges_, v); }
std::span<const int> Graph::incoming(int v) const { return slice(in_offset_, in_edges_, v); }
std::span<const int> Graph::successors(int e) const {
  return slice(succ_offset_, succ_edges_, e);
}
std::span<const int> Graph::predecessors(int e) const {
  return slice(pred_offset_, pred_edges_, e);
}

std::optional<int> Graph::find_edge(int u, int v) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), OrientedEdge{u, v},
                             [](const OrientedEdge& a, const OrientedEdge& b) {
                               return std::pair(a.init, a.term) < std::pair(b.init, b.term);
                             });
  if (it == edges_.end() || it->init != u || it->term != v) return std::nullopt;
  return static_cast<int>(it - edges_.begin());
}

bool Graph::is_turn(int from, int to) const {
  return edges_[from].term == edges_[to].init && from != opposite_[to];
}

bool Graph::is_code(std::span<const int> edges) const {
  if (edges.empty()) return false;
  for (int e : edges) {
    if (e < 0 || e >= edge_count()) return false;
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!is_turn(edges[i - 1], edges[i])) return false;
  }
  return true;
}

Graph load_graph(std::string_view text) {
  std::vector<std::pair<long long, long long>> raw;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    auto parse_id = [&](const std::string& s) {
      if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit) || s.size() > 9) {
        throw Error(ErrorCode::Parse,
                    "line " + std::to_string(line_no) + ": bad vertex id '" + s + "'");
      }
      return std::stoll(s);
    };
    if (!(fields >> b) || (fields >> extra)) {
      throw Error(ErrorCode::Parse,
                  "line " + std::to_string(line_no) + ": expected exactly two vertex ids");
    }
    raw.emplace_back(parse_id(a), parse_id(b));
  }

  std::map<long long, int> index;
  for (auto [u, v] : raw) {
    index.emplace(u, 0);
    index.emplace(v, 0);
  }
  std::vector<int> original;
  for (auto& [label, id] : index) {
    id = static_cast<int>(original.size());
    original.push_back(static_cast<int>(label));
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  for (auto [u, v] : raw) edges.emplace_back(index[u], index[v]);
  return Graph::from_edges(edges, std::move(original));
}

Graph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read graph file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_graph(buffer.str());
}

std::vector<int> turns_into(const Graph& g, int e) {
  if (e < 0 || e >= g.edge_count()) {
    throw Error(ErrorCode::InvalidArgument, "edge index out of range");
  }
  auto p = g.predecessors(e);
  return {p.begin(), p.end()};
}

}  // namespace nbspec
