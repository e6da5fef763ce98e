#include "nbspec/district_tree.hpp"

#include <algorithm>
#include <string>

#include "nbspec/error.hpp"

namespace nbspec {

DistrictTree::DistrictTree(const Graph& g, int depth) : graph_(g) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "code depth must be >= 1");
  if (depth > kMaxDepth) {
    throw Error(ErrorCode::TooLarge, "code depth " + std::to_string(depth) + " exceeds " +
                                         std::to_string(kMaxDepth));
  }

  Level first;
  const int m = g.edge_count();
  for (int e = 0; e < m; ++e) {
    first.codes.push_back(e);
    first.parent.push_back(-1);
    first.tail.push_back(-1);
  }
  levels_.push_back(std::move(first));

  for (int n = 1; n < depth; ++n) {
    Level& prev = levels_.back();
    Level next;
    const int count = static_cast<int>(prev.parent.size());
    prev.child_begin.reserve(count + 1);
    for (int i = 0; i < count; ++i) {
      prev.child_begin.push_back(static_cast<int>(next.parent.size()));
      const int* c = prev.codes.data() + static_cast<std::size_t>(i) * n;
      for (int a : g.successors(c[n - 1])) {
        next.codes.insert(next.codes.end(), c, c + n);
        next.codes.push_back(a);
        next.parent.push_back(i);
      }
    }
    prev.child_begin.push_back(static_cast<int>(next.parent.size()));
    if (next.parent.size() > static_cast<std::size_t>(kMaxLevelSize)) {
      throw Error(ErrorCode::TooLarge, "|W_" + std::to_string(n + 1) +
                                           "| = " + std::to_string(next.parent.size()) +
                                           " exceeds " + std::to_string(kMaxLevelSize));
    }
    levels_.push_back(std::move(next));
  }

  // Tails need the finished previous level for lookup.
  for (int n = 2; n <= depth; ++n) {
    Level& lv = levels_[n - 1];
    const int count = static_cast<int>(lv.parent.size());
    for (int i = 0; i < count; ++i) {
      auto c = code(n, i);
      lv.tail.push_back(*find(c.subspan(1)));
    }
  }
  levels_.back().child_begin.assign(levels_.back().parent.size() + 1, 0);
}

std::span<const int> DistrictTree::code(int n, int i) const {
  return {level(n).codes.data() + static_cast<std::size_t>(i) * n, static_cast<std::size_t>(n)};
}

Code DistrictTree::code_vector(int n, int i) const {
  auto c = code(n, i);
  return {c.begin(), c.end()};
}

std::pair<int, int> DistrictTree::children(int n, int i) const {
  if (n >= depth()) return {0, 0};
  const auto& cb = level(n).child_begin;
  return {cb[i], cb[i + 1]};
}

std::optional<int> DistrictTree::find(std::span<const int> c) const {
  const int n = static_cast<int>(c.size());
  if (n < 1 || n > depth()) return std::nullopt;
  // Descend through the children ranges; each range is sorted by last edge.
  int idx = c[0];
  if (idx < 0 || idx >= graph_.edge_count()) return std::nullopt;
  for (int k = 1; k < n; ++k) {
    auto [lo, hi] = children(k, idx);
    const Level& nx = level(k + 1);
    int lo_i = lo, hi_i = hi;
    while (lo_i < hi_i) {
      int mid = (lo_i + hi_i) / 2;
      if (nx.codes[static_cast<std::size_t>(mid) * (k + 1) + k] < c[k]) {
        lo_i = mid + 1;
      } else {
        hi_i = mid;
      }
    }
    if (lo_i == hi || nx.codes[static_cast<std::size_t>(lo_i) * (k + 1) + k] != c[k]) {
      return std::nullopt;
    }
    idx = lo_i;
  }
  return idx;
}

std::optional<int> DistrictTree::prepend(int e, int n, int i) const {
  if (n + 1 > depth() || !graph_.is_turn(e, first_edge(n, i))) return std::nullopt;
  std::vector<int> c;
  c.reserve(n + 1);
  c.push_back(e);
  auto rest = code(n, i);
  c.insert(c.end(), rest.begin(), rest.end());
  return find(c);
}

DistrictTree enumerate_codes(const Graph& g, int n) { return DistrictTree(g, n); }

}  // namespace nbspec
