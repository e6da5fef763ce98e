#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "json.hpp"
#include "nbspec/graph.hpp"
#include "nbspec/linalg.hpp"
#include "nbspec/measures.hpp"

namespace nbspec {

/// Universal cover truncated at a depth. Vertex 0 is the root (empty code);
/// every other vertex is the non-backtracking path from the base that reaches
/// it. Vertices are stored level by level, lexicographically within a level.
class TruncatedCover {
 public:
  TruncatedCover(const Graph& g, int base, int depth);

  const Graph& graph() const { return graph_; }
  int base() const { return base_; }
  int depth() const { return depth_; }
  int vertex_count() const { return static_cast<int>(codes_.size()); }

  const Code& code(int v) const { return codes_[v]; }
  int level(int v) const { return static_cast<int>(codes_[v].size()); }
  int parent(int v) const { return parent_[v]; }
  std::span<const int> children(int v) const;
  /// Graph vertex under v.
  int projection(int v) const;
  /// Tree neighbors inside the truncation.
  std::vector<int> neighbors(int v) const;

  std::optional<int> find(const Code& c) const;
  /// Vertex ids at the given level, in storage order.
  std::pair<int, int> level_range(int n) const;

  nlohmann::json to_json() const;

 private:
  Graph graph_;
  int base_;
  int depth_;
  std::vector<Code> codes_;
  std::vector<int> parent_;
  std::vector<int> child_begin_;
  std::vector<int> child_list_;
  std::vector<int> level_begin_;
  std::map<Code, int> index_;
};

TruncatedCover build_cover(const Graph& g, int base, int depth);

/// Free reduction: cancels adjacent e, op(e).
Code reduce_path(const Graph& g, std::span<const int> path);
/// Reduced concatenation a ++ b.
Code concat_reduce(const Graph& g, std::span<const int> a, std::span<const int> b);
/// Reversed loop with every edge replaced by its opposite.
Code invert_loop(const Graph& g, std::span<const int> loop);

/// Reduced word in free generators; letter k+1 is generator k, -(k+1) its
/// inverse.
struct DeckWord {
  std::vector<int> letters;
};

struct DeckGenerators {
  int base = 0;
  std::vector<Code> loops;  // closed non-backtracking paths at the base
  std::vector<std::pair<int, int>> non_tree_edges;  // (u, v) with u < v

  int rank() const { return static_cast<int>(loops.size()); }
  /// Reduced closed path representing a word.
  Code loop_of(const Graph& g, const DeckWord& w) const;
  /// Generators and inverses as single-letter words.
  std::vector<DeckWord> letters() const;
};

/// BFS spanning tree from the base; one generator per non-tree edge.
DeckGenerators deck_generators(const Graph& g, int base);

/// Image of a cover vertex code under the deck transformation with the
/// given loop: the reduced concatenation.
Code act(const Graph& g, std::span<const int> loop, std::span<const int> code);

/// ⟨x, ω⟩ = 2k - |x| with k the common prefix of x and the ray ω (given by
/// a code with |ω| >= |x|).
int horocycle_bracket(std::span<const int> x, std::span<const int> omega);

/// Measure on cover cylinders: one value per cover vertex, the root holding
/// the total mass.
struct BoundaryMeasure {
  std::vector<cplx> values;

  double additivity_residual(const TruncatedCover& cover) const;
};

BoundaryMeasure random_boundary_measure(const TruncatedCover& cover, std::mt19937_64& rng);

/// Σ over the coarsest determining partition of z^⟨x,·⟩ ν; needs
/// level(x) <= depth - 1.
cplx poisson_transform(const TruncatedCover& cover, const BoundaryMeasure& nu, cplx z, int x);
/// Poisson transform at every vertex up to max_level (others left 0).
std::vector<cplx> poisson_all(const TruncatedCover& cover, const BoundaryMeasure& nu, cplx z,
                              int max_level);

/// max |Σ_{y~x} F(y) - (z + q/z) F(x)| over vertices of level <= depth - 2.
double tree_equalizer_residual(const TruncatedCover& cover, const std::vector<cplx>& f, cplx z);

/// ν(∂₊e) for the cover edge ending at v: (z F(v) - F(parent)) / ((z² - 1) z^|parent|).
cplx boundary_value(const TruncatedCover& cover, const std::vector<cplx>& f, cplx z, int v);
/// Boundary values at all vertices of level 1..max_level.
BoundaryMeasure boundary_values(const TruncatedCover& cover, const std::vector<cplx>& f, cplx z,
                                int max_level);

/// ν(v) = μ(code of v); μ must be at least as deep as the cover.
BoundaryMeasure restriction(const MeasureTable& mu, const TruncatedCover& cover);
/// f(op e) = z^(|v|-1) ν(v) over every vertex v whose last edge is e.
/// `spread` receives the largest disagreement between candidates.
Vec reconstruct_edge_function(const BoundaryMeasure& nu, const TruncatedCover& cover, cplx z,
                              double* spread = nullptr);

struct TwistedInvarianceReport {
  int checked = 0;
  int violations = 0;
  double max_residual = 0;
};

/// z^|p| ν(v) = z^|γp| ν(γv) for generators and inverses and every cover edge
/// p -> v whose image still points away from the root inside the truncation.
TwistedInvarianceReport twisted_invariance(const TruncatedCover& cover,
                                           const DeckGenerators& gens, const BoundaryMeasure& nu,
                                           cplx z, double tol);

struct AutomorphismReport {
  int edges_checked = 0;
  int failures = 0;
};

/// Deck actions map cover edges to cover edges and commute with projection.
AutomorphismReport verify_deck_automorphisms(const TruncatedCover& cover,
                                             const DeckGenerators& gens);

struct CocycleReport {
  int horocycle_checks = 0;
  int horocycle_failures = 0;
  /// c(γ1γ2 o, o)(ω) = c(γ2 o, o)(γ1⁻¹ω) c(γ1 o, o)(ω), in exponents.
  int cocycle_checks = 0;
  int cocycle_failures = 0;
  /// Same identity with γ1ω in place of γ1⁻¹ω.
  int printed_cocycle_failures = 0;
  int intertwining_checks = 0;
  int intertwining_skipped = 0;
  double intertwining_residual = 0;
  bool passed(double tol) const {
    return horocycle_failures == 0 && cocycle_failures == 0 && intertwining_residual <= tol;
  }
};

/// Integer identities over all pairs of generators/inverses plus `samples`
/// random words of length <= 3, on ends through every level-3 cylinder.
/// When nu is given, also checks P(c(γo,o) γν) = γ P(ν) for generators and
/// inverses at vertices of level <= 3 where the truncation determines both
/// sides.
CocycleReport verify_cocycle_identities(const TruncatedCover& cover, const DeckGenerators& gens,
                                        cplx z, int samples, std::mt19937_64& rng,
                                        const BoundaryMeasure* nu = nullptr);

/// Cover depth at which every generator's intertwining check is determined
/// at vertices of level <= 3.
int intertwining_depth(const Graph& g, const DeckGenerators& gens);

struct DiagramReport {
  cplx z;
  int dimension = 0;
  int bases_checked = 0;
  int vertices_checked = 0;
  double max_deviation = 0;
  double reconstruction_error = 0;
  double equalizer_residual = 0;
  int restriction_rank = 0;
  bool passed = false;
};

/// Poisson(restriction μ) against the lift of I f, f the canonical transpose
/// of μ, for a basis of the dual eigenspace and every base vertex.
DiagramReport diagram_check(const Graph& g, cplx z, int depth, double tol);

}  // namespace nbspec
