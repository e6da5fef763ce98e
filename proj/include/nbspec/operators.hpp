#pragma once

#include <string>

#include "nbspec/graph.hpp"
#include "nbspec/linalg.hpp"

namespace nbspec {

/// Oriented-edge count above which dense operators are refused.
inline constexpr int kMaxDenseEdges = 5000;

struct Basis {
  enum class Kind { Vertex, Edge, District };
  Kind kind = Kind::Vertex;
  int depth = 0;  // only for District
  int size = 0;

  static Basis vertices(const Graph& g) { return {Kind::Vertex, 0, g.vertex_count()}; }
  static Basis edges(const Graph& g) { return {Kind::Edge, 0, g.edge_count()}; }
  static Basis districts(int depth, int size) { return {Kind::District, depth, size}; }

  std::string name() const;
  friend bool operator==(const Basis&, const Basis&) = default;
};

/// Dense complex matrix with named domain and codomain bases. Columns are
/// indexed by the domain, rows by the codomain.
struct LabeledOperator {
  Mat matrix;
  Basis domain;
  Basis codomain;

  LabeledOperator() = default;
  LabeledOperator(Mat m, Basis dom, Basis cod);

  bool is_square() const { return matrix.rows() == matrix.cols(); }
};

void require_dense_size(const Graph& g);
void require_nonzero(cplx z);

/// Adjacency: (Σf)(x) = sum of f over neighbors of x.
LabeledOperator neighbor_sum(const Graph& g);
/// Adjacency divided by degree.
LabeledOperator neighbor_avg(const Graph& g);
/// Diagonal (z + q(x)/z) / (1 + q(x)).
LabeledOperator local_tweak(const Graph& g, cplx z);
/// Diagonal z + q(x)/z.
LabeledOperator rescale(const Graph& g, cplx z);
/// Non-backtracking matrix: entry [e, a] = 1 iff a ⌢ e.
LabeledOperator turn_sum(const Graph& g);
/// (G_z f)(e) = f(init e) - f(term e) / z.
LabeledOperator twisted_gradient(const Graph& g, cplx z);
/// (I h)(x) = sum of h over edges ending at x.
LabeledOperator in_sum(const Graph& g);
/// Vertex functions viewed on edges through init: [e, x] = 1 iff init(e) = x.
LabeledOperator inclusion(const Graph& g);

struct IdentityResidual {
  cplx z;
  double residual = 0;
  bool passed = false;
  bool near_unit = false;  // |z - 1| or |z + 1| below 1e-6
};

/// Residual of (S - z) G_z - ι (Σ - ρ_z), largest entry in absolute value.
IdentityResidual verify_operator_identity(const Graph& g, cplx z, double tol);

bool is_near_unit(cplx z);
bool is_excluded(cplx z);

}  // namespace nbspec
