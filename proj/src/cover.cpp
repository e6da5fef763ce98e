#include "nbspec/cover.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "nbspec/error.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/path_space.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

namespace {

constexpr int kMaxCoverVertices = 200000;

double rel(double diff, double scale) { return diff / std::max(1.0, scale); }

}  // namespace

TruncatedCover::TruncatedCover(const Graph& g, int base, int depth)
    : graph_(g), base_(base), depth_(depth) {
  if (depth < 2) throw Error(ErrorCode::InvalidArgument, "cover depth must be >= 2");
  if (base < 0 || base >= g.vertex_count()) {
    throw Error(ErrorCode::InvalidArgument, "base vertex out of range");
  }
  codes_.push_back({});
  parent_.push_back(-1);
  level_begin_ = {0, 1};
  for (int e : g.outgoing(base)) {
    codes_.push_back({e});
    parent_.push_back(0);
  }
  level_begin_.push_back(static_cast<int>(codes_.size()));
  for (int n = 1; n < depth; ++n) {
    for (int v = level_begin_[n]; v < level_begin_[n + 1]; ++v) {
      for (int a : g.successors(codes_[v].back())) {
        Code c = codes_[v];
        c.push_back(a);
        codes_.push_back(std::move(c));
        parent_.push_back(v);
      }
      if (codes_.size() > static_cast<std::size_t>(kMaxCoverVertices)) {
        throw Error(ErrorCode::TooLarge, "truncated cover exceeds " +
                                             std::to_string(kMaxCoverVertices) + " vertices");
      }
    }
    level_begin_.push_back(static_cast<int>(codes_.size()));
  }

  // Children of v are contiguous because levels are built parent by parent.
  std::vector<std::vector<int>> kids(codes_.size());
  for (int v = 1; v < vertex_count(); ++v) kids[parent_[v]].push_back(v);
  child_begin_.push_back(0);
  for (const auto& k : kids) {
    child_list_.insert(child_list_.end(), k.begin(), k.end());
    child_begin_.push_back(static_cast<int>(child_list_.size()));
  }
  for (int v = 0; v < vertex_count(); ++v) index_.emplace(codes_[v], v);
}

std::span<const int> TruncatedCover::children(int v) const {
  return {child_list_.data() + child_begin_[v],
          static_cast<std::size_t>(child_begin_[v + 1] - child_begin_[v])};
}

int TruncatedCover::projection(int v) const {
  return codes_[v].empty() ? base_ : graph_.term(codes_[v].back());
}

std::vector<int> TruncatedCover::neighbors(int v) const {
  std::vector<int> out;
  if (v != 0) out.push_back(parent_[v]);
  for (int c : children(v)) out.push_back(c);
  return out;
}

std::optional<int> TruncatedCover::find(const Code& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::pair<int, int> TruncatedCover::level_range(int n) const {
  return {level_begin_[n], level_begin_[n + 1]};
}

nlohmann::json TruncatedCover::to_json() const {
  nlohmann::json vertices = nlohmann::json::array();
  for (int v = 0; v < vertex_count(); ++v) {
    vertices.push_back({{"code", codes_[v]}, {"projection", graph_.original_ids()[projection(v)]}});
  }
  return {{"base", graph_.original_ids()[base_]}, {"depth", depth_}, {"vertices", vertices}};
}

TruncatedCover build_cover(const Graph& g, int base, int depth) {
  return TruncatedCover(g, base, depth);
}

Code reduce_path(const Graph& g, std::span<const int> path) {
  Code out;
  for (int e : path) {
    if (!out.empty() && out.back() == g.opposite(e)) {
      out.pop_back();
    } else {
      out.push_back(e);
    }
  }
  return out;
}

Code concat_reduce(const Graph& g, std::span<const int> a, std::span<const int> b) {
  Code joined(a.begin(), a.end());
  joined.insert(joined.end(), b.begin(), b.end());
  return reduce_path(g, joined);
}

Code invert_loop(const Graph& g, std::span<const int> loop) {
  Code out;
  for (auto it = loop.rbegin(); it != loop.rend(); ++it) out.push_back(g.opposite(*it));
  return out;
}

Code DeckGenerators::loop_of(const Graph& g, const DeckWord& w) const {
  Code out;
  for (int letter : w.letters) {
    const Code& l = loops.at(std::abs(letter) - 1);
    out = concat_reduce(g, out, letter > 0 ? l : invert_loop(g, l));
  }
  return out;
}

std::vector<DeckWord> DeckGenerators::letters() const {
  std::vector<DeckWord> out;
  for (int k = 1; k <= rank(); ++k) {
    out.push_back({{k}});
    out.push_back({{-k}});
  }
  return out;
}

DeckGenerators deck_generators(const Graph& g, int base) {
  if (base < 0 || base >= g.vertex_count()) {
    throw Error(ErrorCode::InvalidArgument, "base vertex out of range");
  }
  const int n = g.vertex_count();
  std::vector<int> via(n, -1);  // tree edge into each vertex
  std::vector<char> seen(n, 0);
  std::vector<char> tree_edge(g.edge_count(), 0);
  std::queue<int> frontier;
  frontier.push(base);
  seen[base] = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int e : g.outgoing(v)) {
      int w = g.term(e);
      if (seen[w]) continue;
      seen[w] = 1;
      via[w] = e;
      tree_edge[e] = tree_edge[g.opposite(e)] = 1;
      frontier.push(w);
    }
  }
  auto path_from_base = [&](int v) {
    Code p;
    for (; v != base; v = g.init(via[v])) p.push_back(via[v]);
    std::reverse(p.begin(), p.end());
    return p;
  };

  DeckGenerators gens;
  gens.base = base;
  for (int e = 0; e < g.edge_count(); ++e) {
    int u = g.init(e), v = g.term(e);
    if (tree_edge[e] || u > v) continue;
    Code loop = path_from_base(u);
    loop.push_back(e);
    Code back = invert_loop(g, path_from_base(v));
    loop.insert(loop.end(), back.begin(), back.end());
    gens.loops.push_back(reduce_path(g, loop));
    gens.non_tree_edges.emplace_back(g.original_ids()[u], g.original_ids()[v]);
  }
  return gens;
}

namespace {

DeckWord random_word(int rank, int max_len, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, max_len), gen(1, rank), sign(0, 1);
  DeckWord w;
  const int l = len(rng);
  while (static_cast<int>(w.letters.size()) < l) {
    int letter = sign(rng) ? gen(rng) : -gen(rng);
    if (!w.letters.empty() && w.letters.back() == -letter) continue;
    w.letters.push_back(letter);
  }
  return w;
}

}  // namespace

Code act(const Graph& g, std::span<const int> loop, std::span<const int> code) {
  return concat_reduce(g, loop, code);
}

int horocycle_bracket(std::span<const int> x, std::span<const int> omega) {
  if (omega.size() < x.size()) {
    throw Error(ErrorCode::DepthTooShallow, "cylinder too shallow to determine the bracket");
  }
  return 2 * shared_prefix(x, omega) - static_cast<int>(x.size());
}

double BoundaryMeasure::additivity_residual(const TruncatedCover& cover) const {
  double worst = 0;
  for (int v = 0; v < cover.vertex_count(); ++v) {
    if (cover.level(v) >= cover.depth()) continue;
    cplx sum = 0;
    for (int c : cover.children(v)) sum += values[c];
    worst = std::max(worst, std::abs(sum - values[v]));
  }
  return worst;
}

BoundaryMeasure random_boundary_measure(const TruncatedCover& cover, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BoundaryMeasure nu;
  nu.values.assign(cover.vertex_count(), 0.0);
  auto [lo, hi] = cover.level_range(cover.depth());
  for (int v = lo; v < hi; ++v) {
    double re = unit(rng);
    nu.values[v] = cplx(re, unit(rng));
  }
  for (int v = lo - 1; v >= 0; --v) {
    for (int c : cover.children(v)) nu.values[v] += nu.values[c];
  }
  return nu;
}

cplx poisson_transform(const TruncatedCover& cover, const BoundaryMeasure& nu, cplx z, int x) {
  require_nonzero(z);
  const int d = cover.level(x);
  if (d > cover.depth() - 1) {
    throw Error(ErrorCode::DepthTooShallow, "vertex too deep for the truncated boundary");
  }
  // Ends through x have bracket d; ends leaving the ray at level k < d have
  // bracket 2k - d.
  std::vector<int> ray(d + 1);
  for (int v = x, k = d; k >= 0; --k, v = cover.parent(v)) ray[k] = v;
  cplx total = std::pow(z, d) * nu.values[x];
  for (int k = 0; k < d; ++k) {
    total += std::pow(z, 2 * k - d) * (nu.values[ray[k]] - nu.values[ray[k + 1]]);
  }
  return total;
}

std::vector<cplx> poisson_all(const TruncatedCover& cover, const BoundaryMeasure& nu, cplx z,
                              int max_level) {
  std::vector<cplx> f(cover.vertex_count(), 0.0);
  for (int v = 0; v < cover.vertex_count() && cover.level(v) <= max_level; ++v) {
    f[v] = poisson_transform(cover, nu, z, v);
  }
  return f;
}

double tree_equalizer_residual(const TruncatedCover& cover, const std::vector<cplx>& f, cplx z) {
  double worst = 0;
  for (int v = 0; v < cover.vertex_count() && cover.level(v) <= cover.depth() - 2; ++v) {
    cplx sum = 0;
    for (int y : cover.neighbors(v)) sum += f[y];
    const double q = cover.graph().q(cover.projection(v));
    worst = std::max(worst, rel(std::abs(sum - (z + q / z) * f[v]), std::abs(f[v])));
  }
  return worst;
}

cplx boundary_value(const TruncatedCover& cover, const std::vector<cplx>& f, cplx z, int v) {
  if (is_excluded(z)) throw Error(ErrorCode::ExcludedParameter, "z must avoid -1, 0 and 1");
  if (v == 0) throw Error(ErrorCode::InvalidArgument, "boundary value needs a non-root vertex");
  const int p = cover.parent(v);
  return (z * f[v] - f[p]) / ((z * z - 1.0) * std::pow(z, cover.level(p)));
}

BoundaryMeasure boundary_values(const TruncatedCover& cover, const std::vector<cplx>& f, cplx z,
                                int max_level) {
  BoundaryMeasure nu;
  nu.values.assign(cover.vertex_count(), 0.0);
  for (int v = 1; v < cover.vertex_count() && cover.level(v) <= max_level; ++v) {
    nu.values[v] = boundary_value(cover, f, z, v);
    if (cover.level(v) == 1) nu.values[0] += nu.values[v];
  }
  return nu;
}

BoundaryMeasure restriction(const MeasureTable& mu, const TruncatedCover& cover) {
  const Graph& g = mu.tree().graph();
  if (g.edge_count() != cover.graph().edge_count() ||
      g.vertex_count() != cover.graph().vertex_count()) {
    throw Error(ErrorCode::BaseMismatch, "measure and cover live on different graphs");
  }
  if (mu.depth() < cover.depth()) {
    throw Error(ErrorCode::DepthTooShallow, "measure table shallower than the cover");
  }
  BoundaryMeasure nu;
  nu.values.assign(cover.vertex_count(), 0.0);
  for (int v = 1; v < cover.vertex_count(); ++v) {
    const Code& c = cover.code(v);
    auto idx = mu.tree().find(c);
    if (!idx) throw Error(ErrorCode::BaseMismatch, "cover path is not a postal code");
    nu.values[v] = mu.value(static_cast<int>(c.size()), *idx);
    if (c.size() == 1) nu.values[0] += nu.values[v];
  }
  return nu;
}

Vec reconstruct_edge_function(const BoundaryMeasure& nu, const TruncatedCover& cover, cplx z,
                              double* spread) {
  require_nonzero(z);
  const Graph& g = cover.graph();
  Vec f = Vec::Zero(g.edge_count());
  std::vector<char> have(g.edge_count(), 0);
  double worst = 0;
  for (int v = 1; v < cover.vertex_count(); ++v) {
    const int target = g.opposite(cover.code(v).back());
    const cplx candidate = std::pow(z, cover.level(v) - 1) * nu.values[v];
    if (!have[target]) {
      f[target] = candidate;
      have[target] = 1;
    } else {
      worst = std::max(worst, rel(std::abs(candidate - f[target]), std::abs(f[target])));
    }
  }
  if (std::find(have.begin(), have.end(), 0) != have.end()) {
    throw Error(ErrorCode::DepthTooShallow, "cover too shallow to reach every oriented edge");
  }
  if (spread) *spread = worst;
  return f;
}

TwistedInvarianceReport twisted_invariance(const TruncatedCover& cover,
                                           const DeckGenerators& gens, const BoundaryMeasure& nu,
                                           cplx z, double tol) {
  const Graph& g = cover.graph();
  TwistedInvarianceReport r;
  for (const auto& w : gens.letters()) {
    const Code loop = gens.loop_of(g, w);
    for (int v = 1; v < cover.vertex_count(); ++v) {
      const int p = cover.parent(v);
      Code gp = act(g, loop, cover.code(p));
      Code gv = act(g, loop, cover.code(v));
      if (gv.size() != gp.size() + 1 || static_cast<int>(gv.size()) > cover.depth()) continue;
      const cplx lhs = std::pow(z, cover.level(p)) * nu.values[v];
      const cplx rhs = std::pow(z, static_cast<int>(gp.size())) * nu.values[*cover.find(gv)];
      const double res = rel(std::abs(lhs - rhs), std::abs(lhs));
      ++r.checked;
      r.max_residual = std::max(r.max_residual, res);
      if (res > tol) ++r.violations;
    }
  }
  return r;
}

AutomorphismReport verify_deck_automorphisms(const TruncatedCover& cover,
                                             const DeckGenerators& gens) {
  const Graph& g = cover.graph();
  AutomorphismReport r;
  auto project = [&](const Code& c) { return c.empty() ? cover.base() : g.term(c.back()); };
  for (const auto& w : gens.letters()) {
    const Code loop = gens.loop_of(g, w);
    for (int v = 1; v < cover.vertex_count(); ++v) {
      const Code& pc = cover.code(cover.parent(v));
      Code gp = act(g, loop, pc);
      Code gv = act(g, loop, cover.code(v));
      if (static_cast<int>(std::max(gp.size(), gv.size())) > cover.depth()) continue;
      ++r.edges_checked;
      const Code& shorter = gp.size() < gv.size() ? gp : gv;
      const Code& longer = gp.size() < gv.size() ? gv : gp;
      bool adjacent = longer.size() == shorter.size() + 1 &&
                      std::equal(shorter.begin(), shorter.end(), longer.begin());
      bool projects = project(gp) == project(pc) && project(gv) == cover.projection(v);
      if (!adjacent || !projects) ++r.failures;
    }
  }
  return r;
}

CocycleReport verify_cocycle_identities(const TruncatedCover& cover, const DeckGenerators& gens,
                                        cplx z, int samples, std::mt19937_64& rng,
                                        const BoundaryMeasure* nu) {
  const Graph& g = cover.graph();
  const auto pref = PreferredContinuation::smallest_successor(g);
  CocycleReport r;
  if (gens.rank() == 0) return r;

  std::vector<std::pair<DeckWord, DeckWord>> pairs;
  const auto letters = gens.letters();
  pairs.push_back({DeckWord{}, DeckWord{}});
  for (const auto& a : letters) {
    for (const auto& b : letters) pairs.push_back({a, b});
  }
  for (int s = 0; s < samples; ++s) {
    pairs.push_back({random_word(gens.rank(), 3, rng), random_word(gens.rank(), 3, rng)});
  }

  std::size_t longest = 0;
  std::vector<std::array<Code, 3>> loops;
  for (const auto& [a, b] : pairs) {
    Code la = gens.loop_of(g, a), lb = gens.loop_of(g, b);
    Code lab = concat_reduce(g, la, lb);
    longest = std::max({longest, la.size(), lb.size(), lab.size()});
    loops.push_back({la, lb, lab});
  }

  // One end per level-3 cylinder, continued by preferred turns well past
  // every cancellation.
  const int cyl = std::min(3, cover.depth());
  const std::size_t end_len = cyl + 2 * longest + 4;
  std::vector<Code> ends;
  auto [lo, hi] = cover.level_range(cyl);
  for (int v = lo; v < hi; ++v) {
    Code c = cover.code(v);
    while (c.size() < end_len) c.push_back(pref.next[c.back()]);
    ends.push_back(std::move(c));
  }
  std::vector<int> points;
  for (int v = 0; v < cover.vertex_count() && cover.level(v) <= cyl; ++v) points.push_back(v);

  for (const auto& [la, lb, lab] : loops) {
    const Code la_inv = invert_loop(g, la);
    for (const Code& omega : ends) {
      for (const Code* loop : {&la, &lb, &lab}) {
        const Code gw = act(g, *loop, omega);
        for (int x : points) {
          const Code gx = act(g, *loop, cover.code(x));
          ++r.horocycle_checks;
          if (horocycle_bracket(gx, gw) !=
              horocycle_bracket(cover.code(x), omega) + horocycle_bracket(*loop, gw)) {
            ++r.horocycle_failures;
          }
        }
      }
      const int lhs = -horocycle_bracket(lab, omega);
      const int rhs = -horocycle_bracket(lb, act(g, la_inv, omega)) - horocycle_bracket(la, omega);
      const int printed = -horocycle_bracket(lb, act(g, la, omega)) - horocycle_bracket(la, omega);
      ++r.cocycle_checks;
      if (lhs != rhs) ++r.cocycle_failures;
      if (lhs != printed) ++r.printed_cocycle_failures;
    }
  }

  if (nu) {
    const int depth = cover.depth();
    auto [wlo, whi] = cover.level_range(depth);
    for (const auto& w : letters) {
      const Code loop = gens.loop_of(g, w);
      if (static_cast<int>(loop.size()) >= depth) continue;
      const Code inv = invert_loop(g, loop);
      for (int x : points) {
        const Code back = act(g, inv, cover.code(x));
        const auto target = cover.find(back);
        if (!target || static_cast<int>(back.size()) > depth - 1) {
          ++r.intertwining_skipped;
          continue;
        }
        // Each level-depth cylinder w maps to the cylinder γw, which fixes
        // both brackets once it is at least as long as x and γo.
        const std::size_t need = std::max<std::size_t>(cover.code(x).size(), loop.size());
        cplx lhs = 0;
        bool determined = true;
        for (int wv = wlo; wv < whi; ++wv) {
          const Code gw = act(g, loop, cover.code(wv));
          if (gw.size() < need) {
            determined = false;
            break;
          }
          const int expo = horocycle_bracket(cover.code(x), gw) - horocycle_bracket(loop, gw);
          lhs += std::pow(z, expo) * nu->values[wv];
        }
        if (!determined) {
          ++r.intertwining_skipped;
          continue;
        }
        const cplx rhs = poisson_transform(cover, *nu, z, *target);
        ++r.intertwining_checks;
        r.intertwining_residual =
            std::max(r.intertwining_residual, rel(std::abs(lhs - rhs), std::abs(rhs)));
      }
    }
  }
  return r;
}

int intertwining_depth(const Graph& g, const DeckGenerators& gens) {
  int longest = 0;
  for (const auto& w : gens.letters()) {
    longest = std::max(longest, static_cast<int>(gens.loop_of(g, w).size()));
  }
  return std::max({6, 2 * longest, longest + 3});
}

DiagramReport diagram_check(const Graph& g, cplx z, int depth, double tol) {
  if (is_excluded(z)) throw Error(ErrorCode::ExcludedParameter, "z must avoid -1, 0 and 1");
  const Mat s = turn_sum(g).matrix;
  const Mat basis = null_space(s - z * Mat::Identity(s.rows(), s.cols()), kDefaultRankTol);
  if (basis.cols() == 0) throw Error(ErrorCode::NotEigen, "z is not an eigenvalue of S");
  const Mat in = in_sum(g).matrix;
  auto tree = std::make_shared<const DistrictTree>(g, depth);

  DiagramReport r;
  r.z = z;
  r.dimension = static_cast<int>(basis.cols());
  std::vector<MeasureTable> measures;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    measures.push_back(measure_from_edge_function(tree, basis.col(j), z, depth, kDefaultRankTol));
  }
  r.restriction_rank = r.dimension;
  for (int b = 0; b < g.vertex_count(); ++b) {
    const TruncatedCover cover(g, b, depth);
    Mat restricted(cover.vertex_count(), basis.cols());
    for (std::size_t j = 0; j < measures.size(); ++j) {
      const auto nu = restriction(measures[j], cover);
      const auto poisson = poisson_all(cover, nu, z, depth - 1);
      const Vec f = canonical_transpose(measures[j], z, kDefaultRankTol);
      const Vec vertex_fn = in * f;
      for (int v = 0; v < cover.vertex_count() && cover.level(v) <= depth - 1; ++v) {
        const cplx expected = vertex_fn[cover.projection(v)];
        r.max_deviation =
            std::max(r.max_deviation, rel(std::abs(poisson[v] - expected), std::abs(expected)));
        ++r.vertices_checked;
      }
      r.equalizer_residual =
          std::max(r.equalizer_residual, tree_equalizer_residual(cover, poisson, z));
      double spread = 0;
      const Vec back = reconstruct_edge_function(nu, cover, z, &spread);
      r.reconstruction_error =
          std::max({r.reconstruction_error, spread, rel(max_abs(back - f), max_abs(f))});
      for (int v = 0; v < cover.vertex_count(); ++v) restricted(v, j) = nu.values[v];
    }
    r.restriction_rank = std::min(r.restriction_rank, numerical_rank(restricted, kDefaultRankTol));
    ++r.bases_checked;
  }
  r.passed = r.max_deviation <= tol && r.equalizer_residual <= tol &&
             r.reconstruction_error <= tol && r.restriction_rank == r.dimension;
  return r;
}

}  // namespace nbspec
