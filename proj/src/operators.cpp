#include "nbspec/operators.hpp"

#include "nbspec/error.hpp"

namespace nbspec {

namespace {
constexpr double kUnitWarn = 1e-6;
}

std::string Basis::name() const {
  switch (kind) {
    case Kind::Vertex: return "vertex";
    case Kind::Edge: return "edge";
    case Kind::District: return "district(" + std::to_string(depth) + ")";
  }
  return "?";
}

LabeledOperator::LabeledOperator(Mat m, Basis dom, Basis cod)
    : matrix(std::move(m)), domain(dom), codomain(cod) {
  if (matrix.cols() != dom.size || matrix.rows() != cod.size) {
    throw Error(ErrorCode::ShapeMismatch, "matrix shape does not match " + dom.name() + " -> " +
                                              cod.name() + " bases");
  }
}

void require_dense_size(const Graph& g) {
  if (g.edge_count() > kMaxDenseEdges) {
    throw Error(ErrorCode::TooLarge, std::to_string(g.edge_count()) +
                                         " oriented edges exceed the dense limit of " +
                                         std::to_string(kMaxDenseEdges));
  }
}

void require_nonzero(cplx z) {
  if (z == cplx(0.0)) throw Error(ErrorCode::ExcludedParameter, "z must be nonzero");
}

bool is_near_unit(cplx z) {
  return std::abs(z - 1.0) < kUnitWarn || std::abs(z + 1.0) < kUnitWarn;
}

bool is_excluded(cplx z) { return is_near_unit(z) || std::abs(z) < kUnitWarn; }

LabeledOperator neighbor_sum(const Graph& g) {
  require_dense_size(g);
  const int n = g.vertex_count();
  Mat a = Mat::Zero(n, n);
  for (int e = 0; e < g.edge_count(); ++e) a(g.init(e), g.term(e)) = 1.0;
  return {a, Basis::vertices(g), Basis::vertices(g)};
}

LabeledOperator neighbor_avg(const Graph& g) {
  auto op = neighbor_sum(g);
  for (int x = 0; x < g.vertex_count(); ++x) op.matrix.row(x) /= double(g.degree(x));
  return op;
}

LabeledOperator rescale(const Graph& g, cplx z) {
  require_nonzero(z);
  require_dense_size(g);
  const int n = g.vertex_count();
  Mat d = Mat::Zero(n, n);
  for (int x = 0; x < n; ++x) d(x, x) = z + double(g.q(x)) / z;
  return {d, Basis::vertices(g), Basis::vertices(g)};
}

LabeledOperator local_tweak(const Graph& g, cplx z) {
  auto op = rescale(g, z);
  for (int x = 0; x < g.vertex_count(); ++x) op.matrix(x, x) /= double(g.degree(x));
  return op;
}

LabeledOperator turn_sum(const Graph& g) {
  require_dense_size(g);
  const int m = g.edge_count();
  Mat s = Mat::Zero(m, m);
  for (int e = 0; e < m; ++e) {
    for (int a : g.predecessors(e)) s(e, a) = 1.0;
  }
  return {s, Basis::edges(g), Basis::edges(g)};
}

LabeledOperator twisted_gradient(const Graph& g, cplx z) {
  require_nonzero(z);
  require_dense_size(g);
  Mat m = Mat::Zero(g.edge_count(), g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    m(e, g.init(e)) += 1.0;
    m(e, g.term(e)) -= 1.0 / z;
  }
  return {m, Basis::vertices(g), Basis::edges(g)};
}

LabeledOperator in_sum(const Graph& g) {
  require_dense_size(g);
  Mat m = Mat::Zero(g.vertex_count(), g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) m(g.term(e), e) = 1.0;
  return {m, Basis::edges(g), Basis::vertices(g)};
}

LabeledOperator inclusion(const Graph& g) {
  require_dense_size(g);
  Mat m = Mat::Zero(g.edge_count(), g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e) m(e, g.init(e)) = 1.0;
  return {m, Basis::vertices(g), Basis::edges(g)};
}

IdentityResidual verify_operator_identity(const Graph& g, cplx z, double tol) {
  require_nonzero(z);
  const Mat s = turn_sum(g).matrix;
  const Mat lhs = (s - z * Mat::Identity(s.rows(), s.cols())) * twisted_gradient(g, z).matrix;
  const Mat rhs = inclusion(g).matrix * (neighbor_sum(g).matrix - rescale(g, z).matrix);
  IdentityResidual r;
  r.z = z;
  r.residual = max_abs(lhs - rhs);
  r.passed = r.residual <= tol;
  r.near_unit = is_near_unit(z);
  return r;
}

}  // namespace nbspec
