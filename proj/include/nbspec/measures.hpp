#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "json.hpp"
#include "nbspec/district_tree.hpp"
#include "nbspec/linalg.hpp"
#include "nbspec/path_space.hpp"

namespace nbspec {

/// Values of a finitely additive measure on every code of length 1..depth.
class MeasureTable {
 public:
  MeasureTable(std::shared_ptr<const DistrictTree> tree, int depth);

  /// Additive measure whose deepest level is `leaves`; shallower levels are
  /// sums over forward extensions.
  static MeasureTable from_leaves(std::shared_ptr<const DistrictTree> tree, int depth,
                                  const Vec& leaves);

  const DistrictTree& tree() const { return *tree_; }
  const std::shared_ptr<const DistrictTree>& tree_ptr() const { return tree_; }
  int depth() const { return static_cast<int>(levels_.size()); }

  cplx value(int n, int i) const { return levels_[n - 1][i]; }
  void set(int n, int i, cplx v) { levels_[n - 1][i] = v; }
  const Vec& level(int n) const { return levels_[n - 1]; }
  Vec& level(int n) { return levels_[n - 1]; }

  /// max |μ(c) - Σ μ(c ⌢ a)| over codes shorter than depth.
  double additivity_residual() const;
  /// Largest absolute value on any code.
  double max_abs() const;

  nlohmann::json to_json() const;
  static MeasureTable from_json(std::shared_ptr<const DistrictTree> tree,
                                const nlohmann::json& j);

 private:
  std::shared_ptr<const DistrictTree> tree_;
  std::vector<Vec> levels_;
};

/// μ(e1 ... en) = z^(1-n) f(op(en)) for f in null(S - z).
MeasureTable measure_from_edge_function(std::shared_ptr<const DistrictTree> tree, const Vec& f,
                                        cplx z, int depth, double tol = 1e-8);

/// Dual transfer: (L'μ)(e ⌢ c) = μ(c), and on single edges
/// (L'μ)(e) = Σ_{e ⌢ a} μ(a). Keeps the full depth.
MeasureTable dual_transfer_apply(const MeasureTable& mu);

/// max |L'μ - zμ| over all codes.
double dual_eigen_residual(const MeasureTable& mu, cplx z);

/// ⟨φ, μ⟩ = Σ_{c in W_n} φ(c) μ(c).
cplx pairing(const DependsFunction& phi, const MeasureTable& mu);

/// Additive measure with uniform random leaves on the unit square.
MeasureTable random_measure(std::shared_ptr<const DistrictTree> tree, int depth,
                            std::mt19937_64& rng);

struct DualityReport {
  int depth = 0;
  int trials = 0;
  int indicator_checks = 0;
  int indicator_failures = 0;
  double max_duality_residual = 0;
  double max_representation_residual = 0;  // ⟨φ, μ⟩ at depth n vs n+1
  bool passed(double tol) const {
    return indicator_failures == 0 && max_duality_residual <= tol &&
           max_representation_residual <= tol;
  }
};

/// L(1_{e ⌢ c}) = 1_c on all indicators of depth <= D-1 and
/// ⟨Lφ, μ⟩ = ⟨φ, L'μ⟩ on random φ in D_{D-1} and random additive μ.
DualityReport transfer_duality_check(std::shared_ptr<const DistrictTree> tree, int depth,
                                     int trials, std::uint64_t seed);

/// f(e) = μ(op(e)); μ must be a dual eigenmeasure at z.
Vec canonical_transpose(const MeasureTable& mu, cplx z, double tol = 1e-8);

/// B(f, g) = fᵀ P g with P[e, op e] = 1.
Mat edge_form(const Graph& g);

/// max |B(Sf, g) - B(f, Sg)| over random pairs.
double edge_form_symmetry_residual(const Graph& g, int trials, std::mt19937_64& rng);

struct DegeneracyVerdict {
  cplx z;
  int dimension = 0;
  int gram_rank = 0;
  bool degenerate = false;
  int jordan_block = 0;
  bool agrees = false;
  /// |Gram via tables - Gram via the edge form|.
  double form_residual = 0;
};

/// Gram matrix of the pairing between eigenspace(L', z) and
/// eigenspace(L, z) = null(S - z); degenerate iff rank < dimension.
DegeneracyVerdict degeneracy_test(const Graph& g, cplx z, double tol = 1e-8);

/// Operator pair with ⟨Aφ, μ⟩ = ⟨φ, A'μ⟩ for ⟨φ, μ⟩ = (Mμ)ᵀ φ, and A
/// carrying planted Jordan blocks at `lambda`.
struct AdjointPair {
  Mat a;
  Mat a_dual;
  Mat m;
  cplx lambda;
  std::vector<int> blocks;
  int max_block() const;
};

AdjointPair make_planted_pair(std::mt19937_64& rng);

struct SyntheticVerdict {
  int eigen_dimension = 0;
  int eigen_gram_rank = 0;
  int generalized_dimension = 0;
  int generalized_gram_rank = 0;
  int jordan = 0;
  int jordan_dual = 0;
  bool degenerate_on_eigen() const { return eigen_gram_rank < eigen_dimension; }
  bool degenerate_on_generalized() const {
    return generalized_gram_rank < generalized_dimension;
  }
};

SyntheticVerdict synthetic_degeneracy(const AdjointPair& pair, double tol = 1e-8);

struct ExtensionReport {
  cplx z;
  double theta = 0;
  int trials = 0;
  int violations = 0;
  double worst_ratio = 0;  // |difference| / bound
};

/// For |z| > θ q_max: |⟨φ, μ⟩ - ⟨Π_1 φ, μ⟩| <=
/// c1(φ) (1 - θ q_max / |z|)^-1 |X| q_max max_e |μ(e)| on random φ in D_n.
ExtensionReport extension_bound_check(const MeasureTable& mu, cplx z, double theta, int n,
                                      int trials, std::mt19937_64& rng);

}  // namespace nbspec
