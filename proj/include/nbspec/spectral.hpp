#pragma once

#include <cstdint>
#include <vector>

#include "nbspec/graph.hpp"
#include "nbspec/linalg.hpp"
#include "nbspec/operators.hpp"

namespace nbspec {

inline constexpr double kDefaultRankTol = 1e-8;
inline constexpr double kDefaultClusterTol = 1e-6;

struct EigenCluster {
  cplx value;
  int algebraic = 0;
  int geometric = 0;
  int max_block = 0;
};

struct SpectrumReport {
  std::vector<EigenCluster> clusters;  // sorted by (real, imag)
  double cluster_tol = kDefaultClusterTol;
  double rank_tol = kDefaultRankTol;

  int dimension() const;
  double spectral_radius() const;
};

/// Raw eigenvalues, sorted by (real, imag).
std::vector<cplx> eigenvalues(const Mat& a);

/// Groups values closer than tol (single linkage); returns (mean, count)
/// sorted by (real, imag).
std::vector<std::pair<cplx, int>> cluster_values(const std::vector<cplx>& values, double tol);

SpectrumReport spectrum(const LabeledOperator& op, double cluster_tol = kDefaultClusterTol,
                        double rank_tol = kDefaultRankTol);
SpectrumReport spectrum(const Mat& a, double cluster_tol = kDefaultClusterTol,
                        double rank_tol = kDefaultRankTol);

/// Orthonormal basis of null(A - B).
Mat equalizer_basis(const LabeledOperator& a, const LabeledOperator& b,
                    double tol = kDefaultRankTol);

/// Largest Jordan block at z: the smallest k with
/// rank (A - z)^k = rank (A - z)^(k+1). Throws NotEigen if A - z has full rank.
int jordan_detect(const Mat& a, cplx z, double rank_tol = kDefaultRankTol);
int jordan_detect(const LabeledOperator& op, cplx z, double rank_tol = kDefaultRankTol);

/// null((A - z)^k).
Mat generalized_eigenspace(const Mat& a, cplx z, int k, double rank_tol = kDefaultRankTol);

struct CorrespondenceReport {
  cplx z;
  int dim_turn_eigenspace = 0;
  int dim_vertex_equalizer = 0;
  int gradient_image_rank = 0;
  /// max |(S - z) G_z h| over the vertex-equalizer basis.
  double gradient_bijectivity_residual = 0;
  /// max |(z - 1/z)^-1 I G_z h - h| over the vertex-equalizer basis.
  double inverse_composition_residual = 0;
  /// max |G_z (z - 1/z)^-1 I f - f| over the turn eigenspace basis.
  double section_residual = 0;
  bool passed = false;
};

CorrespondenceReport correspondence_report(const Graph& g, cplx z, double tol = kDefaultRankTol);

struct PileReport {
  std::vector<std::int64_t> heights;  // heights[n-1] = max_e (S^n 1)(e)
  std::vector<double> roots;          // heights[n-1]^(1/n)
  double radius = 0;
  bool submultiplicative = true;
  bool bounded_below_by_radius = true;
  /// |root_n - R| strictly decreasing over the last four terms.
  bool deviation_decreasing_last4 = true;
  /// max deviation over the last four terms below that of the first four, or
  /// every deviation negligible.
  bool deviation_shrinks = true;
};

PileReport pile_heights(const Graph& g, int n_max = 12);

}  // namespace nbspec
