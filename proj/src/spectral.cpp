#include "nbspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nbspec/error.hpp"

namespace nbspec {

namespace {

bool complex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Tiny real or imaginary parts are rounding noise; zeroing them keeps reports
// stable across platforms.
cplx clean(cplx z) {
  constexpr double eps = 1e-13;
  return {std::abs(z.real()) < eps ? 0.0 : z.real(), std::abs(z.imag()) < eps ? 0.0 : z.imag()};
}

Mat shifted(const Mat& a, cplx z) { return a - z * Mat::Identity(a.rows(), a.cols()); }

void require_square(const Mat& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "matrix is not square");
}

}  // namespace

int SpectrumReport::dimension() const {
  int d = 0;
  for (const auto& c : clusters) d += c.algebraic;
  return d;
}

double SpectrumReport::spectral_radius() const {
  double r = 0;
  for (const auto& c : clusters) r = std::max(r, std::abs(c.value));
  return r;
}

std::vector<cplx> eigenvalues(const Mat& a) {
  require_square(a);
  if (a.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Mat> solver(a, false);
  std::vector<cplx> v(solver.eigenvalues().data(),
                      solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(v.begin(), v.end(), complex_less);
  return v;
}

std::vector<std::pair<cplx, int>> cluster_values(const std::vector<cplx>& values, double tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> root(n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int i) {
    while (root[i] != i) i = root[i] = root[root[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= tol) root[find(i)] = find(j);
    }
  }
  std::vector<std::pair<cplx, int>> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.push_back({0.0, 0});
    }
    out[slot[r]].first += values[i];
    out[slot[r]].second += 1;
  }
  for (auto& [v, c] : out) v = clean(v / double(c));
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    if (std::abs(a.first.real() - b.first.real()) > tol) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  return out;
}

SpectrumReport spectrum(const Mat& a, double cluster_tol, double rank_tol) {
  require_square(a);
  SpectrumReport report;
  report.cluster_tol = cluster_tol;
  report.rank_tol = rank_tol;
  const int n = static_cast<int>(a.rows());
  for (auto [z, count] : cluster_values(eigenvalues(a), cluster_tol)) {
    EigenCluster c;
    c.value = z;
    c.algebraic = count;
    c.geometric = n - numerical_rank(shifted(a, z), rank_tol);
    c.max_block = jordan_detect(a, z, rank_tol);
    report.clusters.push_back(c);
  }
  return report;
}

SpectrumReport spectrum(const LabeledOperator& op, double cluster_tol, double rank_tol) {
  if (!op.is_square() || !(op.domain == op.codomain)) {
    throw Error(ErrorCode::ShapeMismatch, "spectrum needs an operator on a single basis");
  }
  return spectrum(op.matrix, cluster_tol, rank_tol);
}

Mat equalizer_basis(const LabeledOperator& a, const LabeledOperator& b, double tol) {
  if (!(a.domain == b.domain) || !(a.codomain == b.codomain)) {
    throw Error(ErrorCode::ShapeMismatch, "equalizer needs operators on the same bases");
  }
  return null_space(a.matrix - b.matrix, tol);
}

int jordan_detect(const Mat& a, cplx z, double rank_tol) {
  require_square(a);
  // Rank, not eigenvalue distance: a defective eigenvalue is only computed to
  // about eps^(1/k), far outside cluster_tol.
  const int n = static_cast<int>(a.rows());
  const Mat b = shifted(a, z);
  Mat power = b;
  int prev = numerical_rank(power, rank_tol);
  if (prev == n) throw Error(ErrorCode::NotEigen, "z is not an eigenvalue");
  for (int k = 1; k <= n; ++k) {
    power = power * b;
    int r = numerical_rank(power, rank_tol);
    if (r == prev) return k;
    prev = r;
  }
  return n;
}

int jordan_detect(const LabeledOperator& op, cplx z, double rank_tol) {
  return jordan_detect(op.matrix, z, rank_tol);
}

Mat generalized_eigenspace(const Mat& a, cplx z, int k, double rank_tol) {
  require_square(a);
  k = std::clamp(k, 1, static_cast<int>(a.rows()));
  return null_space(matrix_power(shifted(a, z), k), rank_tol);
}

CorrespondenceReport correspondence_report(const Graph& g, cplx z, double tol) {
  if (is_excluded(z)) {
    throw Error(ErrorCode::ExcludedParameter, "z must avoid -1, 0 and 1");
  }
  CorrespondenceReport r;
  r.z = z;
  const Mat s = turn_sum(g).matrix;
  const Mat grad = twisted_gradient(g, z).matrix;
  const Mat in = in_sum(g).matrix / (z - 1.0 / z);

  const Mat turn_eig = null_space(shifted(s, z), tol);
  const Mat vert_eq = equalizer_basis(neighbor_sum(g), rescale(g, z), tol);
  r.dim_turn_eigenspace = static_cast<int>(turn_eig.cols());
  r.dim_vertex_equalizer = static_cast<int>(vert_eq.cols());

  if (vert_eq.cols() > 0) {
    const Mat image = grad * vert_eq;
    r.gradient_image_rank = numerical_rank(image, tol);
    r.gradient_bijectivity_residual = max_abs(shifted(s, z) * image);
    r.inverse_composition_residual = max_abs(in * image - vert_eq);
  }
  if (turn_eig.cols() > 0) r.section_residual = max_abs(grad * (in * turn_eig) - turn_eig);

  r.passed = r.dim_turn_eigenspace == r.dim_vertex_equalizer &&
             r.gradient_image_rank == r.dim_vertex_equalizer &&
             r.gradient_bijectivity_residual <= tol && r.inverse_composition_residual <= tol &&
             r.section_residual <= tol;
  return r;
}

PileReport pile_heights(const Graph& g, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  PileReport r;
  const int m = g.edge_count();
  std::vector<std::int64_t> v(m, 1), next(m);
  for (int n = 1; n <= n_max; ++n) {
    for (int e = 0; e < m; ++e) {
      std::int64_t sum = 0;
      for (int a : g.predecessors(e)) sum += v[a];
      next[e] = sum;
    }
    v.swap(next);
    std::int64_t h = *std::max_element(v.begin(), v.end());
    r.heights.push_back(h);
    r.roots.push_back(std::pow(double(h), 1.0 / n));
  }
  r.radius = spectrum(turn_sum(g)).spectral_radius();

  for (int a = 1; a <= n_max; ++a) {
    for (int b = 1; a + b <= n_max; ++b) {
      if (r.heights[a + b - 1] > r.heights[a - 1] * r.heights[b - 1]) r.submultiplicative = false;
    }
  }
  std::vector<double> dev;
  for (double root : r.roots) {
    if (root < r.radius - 1e-10) r.bounded_below_by_radius = false;
    dev.push_back(std::abs(root - r.radius));
  }
  const int k = std::min(4, n_max);
  for (int i = n_max - k + 1; i < n_max; ++i) {
    if (!(dev[i] < dev[i - 1])) r.deviation_decreasing_last4 = false;
  }
  double head = *std::max_element(dev.begin(), dev.begin() + k);
  double tail = *std::max_element(dev.end() - k, dev.end());
  double all = *std::max_element(dev.begin(), dev.end());
  r.deviation_shrinks = all <= 1e-10 || tail < head;
  return r;
}

}  // namespace nbspec
