#include "nbspec/path_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbspec/error.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

namespace {

constexpr double kSlack = 1e-12;

void require_level(const DistrictTree& tree, int n) {
  if (n < 1 || n > tree.depth()) {
    throw Error(ErrorCode::InvalidArgument, "depth " + std::to_string(n) +
                                                " outside the code tree (max " +
                                                std::to_string(tree.depth()) + ")");
  }
}

void require_function(const DistrictTree& tree, const DependsFunction& f) {
  require_level(tree, f.depth);
  if (f.values.size() != tree.size(f.depth)) {
    throw Error(ErrorCode::ShapeMismatch, "function size does not match W_n");
  }
}

int ancestor(const DistrictTree& tree, int n, int i, int level) {
  for (int k = n; k > level; --k) i = tree.parent(k, i);
  return i;
}

// Index in W_m of code i of W_n continued by preferred turns.
int preferred_extension(const DistrictTree& tree, int n, int i, int m,
                        const PreferredContinuation& pref) {
  Code c = tree.code_vector(n, i);
  while (static_cast<int>(c.size()) < m) c.push_back(pref.next[c.back()]);
  return *tree.find(c);
}

// Group id per code of W_n: the level-j ancestor, or the island for j = 0.
std::vector<int> groups(const DistrictTree& tree, int n, int j) {
  std::vector<int> g(tree.size(n));
  for (int i = 0; i < tree.size(n); ++i) {
    g[i] = j == 0 ? tree.island(n, i) : ancestor(tree, n, i, j);
  }
  return g;
}

}  // namespace

PreferredContinuation PreferredContinuation::smallest_successor(const Graph& g) {
  PreferredContinuation p;
  p.next.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) p.next[e] = g.successors(e).front();
  return p;
}

int shared_prefix(std::span<const int> a, std::span<const int> b) {
  std::size_t s = 0;
  while (s < a.size() && s < b.size() && a[s] == b[s]) ++s;
  return static_cast<int>(s);
}

double code_distance(std::span<const int> a, std::span<const int> b, double theta) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "codes differ in length");
  return std::pow(theta, shared_prefix(a, b));
}

LabeledOperator transfer_matrix(const DistrictTree& tree, int n) {
  require_level(tree, n);
  const Graph& g = tree.graph();
  const int size = tree.size(n);
  Mat t = Mat::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    for (int e0 : g.predecessors(tree.first_edge(n, i))) {
      int col = n == 1 ? e0 : *tree.prepend(e0, n - 1, tree.parent(n, i));
      t(i, col) += 1.0;
    }
  }
  auto basis = Basis::districts(n, size);
  return {t, basis, basis};
}

Mat transfer_step(const DistrictTree& tree, int n) {
  require_level(tree, n);
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "transfer step needs depth >= 2");
  const Graph& g = tree.graph();
  Mat t = Mat::Zero(tree.size(n - 1), tree.size(n));
  for (int i = 0; i < tree.size(n - 1); ++i) {
    for (int e0 : g.predecessors(tree.first_edge(n - 1, i))) {
      t(i, *tree.prepend(e0, n - 1, i)) += 1.0;
    }
  }
  return t;
}

Mat embed(const DistrictTree& tree, int n) {
  require_level(tree, n + 1);
  Mat e = Mat::Zero(tree.size(n + 1), tree.size(n));
  for (int i = 0; i < tree.size(n + 1); ++i) e(i, tree.parent(n + 1, i)) = 1.0;
  return e;
}

DependsFunction lift(const DistrictTree& tree, const DependsFunction& f, int depth) {
  require_function(tree, f);
  require_level(tree, depth);
  if (depth < f.depth) throw Error(ErrorCode::InvalidArgument, "cannot lift to a smaller depth");
  DependsFunction out{depth, Vec(tree.size(depth))};
  for (int i = 0; i < tree.size(depth); ++i) {
    out.values[i] = f.values[ancestor(tree, depth, i, f.depth)];
  }
  return out;
}

DependsFunction apply_transfer(const DistrictTree& tree, const DependsFunction& f) {
  require_function(tree, f);
  const int n = f.depth;
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "transfer step needs depth >= 2");
  const Graph& g = tree.graph();
  DependsFunction out{n - 1, Vec::Zero(tree.size(n - 1))};
  for (int i = 0; i < tree.size(n - 1); ++i) {
    for (int e0 : g.predecessors(tree.first_edge(n - 1, i))) {
      out.values[i] += f.values[*tree.prepend(e0, n - 1, i)];
    }
  }
  return out;
}

double lipschitz_seminorm(const DistrictTree& tree, const DependsFunction& f, int j,
                          double theta) {
  require_function(tree, f);
  const int n = f.depth;
  if (j < 0 || j > n) throw Error(ErrorCode::InvalidArgument, "seminorm level out of range");
  const auto group = groups(tree, n, j);
  double best = 0;
  // Groups are contiguous ranges of W_n.
  for (int lo = 0; lo < tree.size(n);) {
    int hi = lo;
    while (hi < tree.size(n) && group[hi] == group[lo]) ++hi;
    for (int a = lo; a < hi; ++a) {
      for (int b = a + 1; b < hi; ++b) {
        int s = shared_prefix(tree.code(n, a), tree.code(n, b));
        if (s < j || s >= n) continue;
        best = std::max(best, std::abs(f.values[a] - f.values[b]) / std::pow(theta, s));
      }
    }
    lo = hi;
  }
  return best;
}

double lipschitz_seminorm_pairs(const DistrictTree& tree, const DependsFunction& f, int j,
                                double theta) {
  require_function(tree, f);
  const int n = f.depth;
  double best = 0;
  for (int a = 0; a < tree.size(n); ++a) {
    for (int b = 0; b < tree.size(n); ++b) {
      if (tree.island(n, a) != tree.island(n, b)) continue;
      int s = shared_prefix(tree.code(n, a), tree.code(n, b));
      if (s < j || s >= n) continue;
      best = std::max(best, std::abs(f.values[a] - f.values[b]) / std::pow(theta, s));
    }
  }
  return best;
}

double sup_norm(const DependsFunction& f) {
  return f.values.size() == 0 ? 0.0 : f.values.cwiseAbs().maxCoeff();
}

double inner_norm(const DistrictTree& tree, const DependsFunction& f, double theta) {
  return lipschitz_seminorm(tree, f, 1, theta) + sup_norm(f);
}

Mat projection_pi(const DistrictTree& tree, int n, int m, const PreferredContinuation& pref) {
  require_level(tree, n);
  require_level(tree, m);
  if (m < n) throw Error(ErrorCode::InvalidArgument, "projection needs m >= n");
  Mat p = Mat::Zero(tree.size(n), tree.size(m));
  for (int i = 0; i < tree.size(n); ++i) p(i, preferred_extension(tree, n, i, m, pref)) = 1.0;
  return p;
}

Mat projection_step(const DistrictTree& tree, int n, const PreferredContinuation& pref) {
  return projection_pi(tree, n, n + 1, pref);
}

DependsFunction project(const DistrictTree& tree, const DependsFunction& f, int n,
                        const PreferredContinuation& pref) {
  require_function(tree, f);
  if (n >= f.depth) return f;
  const int m = f.depth;
  std::vector<int> target(tree.size(n));
  for (int i = 0; i < tree.size(n); ++i) target[i] = preferred_extension(tree, n, i, m, pref);
  DependsFunction out{m, Vec(tree.size(m))};
  for (int i = 0; i < tree.size(m); ++i) {
    out.values[i] = f.values[target[ancestor(tree, m, i, n)]];
  }
  return out;
}

double commutation_residual(const DistrictTree& tree, int n, const PreferredContinuation& pref) {
  require_level(tree, n + 2);
  const Mat lhs = projection_step(tree, n, pref) * transfer_step(tree, n + 2);
  const Mat rhs = transfer_step(tree, n + 1) * projection_step(tree, n + 1, pref);
  return max_abs(lhs - rhs);
}

DependsFunction random_function(const DistrictTree& tree, int depth, std::mt19937_64& rng) {
  require_level(tree, depth);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DependsFunction f{depth, Vec(tree.size(depth))};
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    double re = unit(rng);
    f.values[i] = cplx(re, unit(rng));
  }
  return f;
}

ContractionReport verify_contraction_bounds(const DistrictTree& tree, double theta, int trials,
                                            int n, std::uint64_t seed) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1)");
  }
  require_level(tree, n);
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "contraction check needs depth >= 2");
  const Graph& g = tree.graph();
  const double qmax = g.q_max();
  const auto piles = pile_heights(g, n - 1).heights;
  const auto pref = PreferredContinuation::smallest_successor(g);

  ContractionReport r;
  r.theta = theta;
  r.depth = n;
  r.trials = trials;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  auto ratio = [](double lhs, double rhs) { return rhs > 0 ? lhs / rhs : (lhs > 0 ? 1e300 : 0); };

  for (int t = 0; t < trials; ++t) {
    const auto f = random_function(tree, n, rng);
    const double sup_f = sup_norm(f);
    const double c1_f = lipschitz_seminorm(tree, f, 1, theta);

    auto lf = apply_transfer(tree, f);
    double sup_lf = sup_norm(lf);
    double c1_lf = lipschitz_seminorm(tree, lf, 1, theta);
    r.worst_sup_ratio = std::max(r.worst_sup_ratio, ratio(sup_lf, qmax * sup_f));
    r.worst_seminorm_ratio = std::max(r.worst_seminorm_ratio, ratio(c1_lf, theta * qmax * c1_f));
    if (sup_lf > qmax * sup_f * (1 + kSlack)) ++r.sup_violations;
    if (c1_lf > theta * qmax * c1_f * (1 + kSlack) + kSlack) ++r.seminorm_violations;

    auto iter = f;
    for (int k = 1; k <= n - 1; ++k) {
      iter = apply_transfer(tree, iter);
      const double pk = double(piles[k - 1]);
      const double tk = std::pow(theta, k);
      const double bound = pk * (tk * c1_f + sup_f);
      const double lhs = inner_norm(tree, iter, theta);
      r.worst_iterated_ratio = std::max(r.worst_iterated_ratio, ratio(lhs, bound));
      if (lhs > bound * (1 + kSlack)) ++r.iterated_violations;

      auto diff = f;
      diff.values -= project(tree, f, k, pref).values;
      for (int step = 0; step < k; ++step) diff = apply_transfer(tree, diff);
      const double approx = sup_norm(diff);
      const double approx_bound = pk * tk * c1_f;
      r.worst_approx_ratio = std::max(r.worst_approx_ratio, ratio(approx, approx_bound));
      if (approx > approx_bound * (1 + kSlack) + kSlack) ++r.approximation_violations;
    }
  }
  return r;
}

double district_variance(const DistrictTree& tree, int n, const Vec& v) {
  const double scale = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  std::vector<cplx> sum(tree.size(1), 0.0);
  std::vector<int> count(tree.size(1), 0);
  std::vector<int> top(tree.size(n));
  for (int i = 0; i < tree.size(n); ++i) {
    top[i] = tree.first_edge(n, i);
    sum[top[i]] += v[i] / scale;
    ++count[top[i]];
  }
  std::vector<double> var(tree.size(1), 0.0);
  for (int i = 0; i < tree.size(n); ++i) {
    cplx mean = sum[top[i]] / double(count[top[i]]);
    var[top[i]] += std::norm(v[i] / scale - mean) / count[top[i]];
  }
  return *std::max_element(var.begin(), var.end());
}

LocConstReport loc_const_spectrum_check(const DistrictTree& tree, int n, double tol) {
  require_level(tree, n);
  const Graph& g = tree.graph();
  const Mat t = transfer_matrix(tree, n).matrix;
  LocConstReport r;
  r.depth = n;
  r.expected_count = g.edge_count();
  r.nonzero_count = numerical_rank(matrix_power(t, n), tol);

  auto ev_t = eigenvalues(t);
  std::sort(ev_t.begin(), ev_t.end(),
            [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  ev_t.resize(std::min<std::size_t>(ev_t.size(), r.nonzero_count));
  const Mat s = turn_sum(g).matrix;
  auto ev_s = eigenvalues(s);
  if (ev_t.size() != ev_s.size()) {
    r.spectrum_mismatch = 1e300;
  } else {
    std::vector<char> used(ev_t.size(), 0);
    for (cplx z : ev_s) {
      double best = 1e300;
      std::size_t pick = 0;
      for (std::size_t k = 0; k < ev_t.size(); ++k) {
        if (!used[k] && std::abs(ev_t[k] - z) < best) {
          best = std::abs(ev_t[k] - z);
          pick = k;
        }
      }
      used[pick] = 1;
      r.spectrum_mismatch = std::max(r.spectrum_mismatch, best);
    }
  }

  for (auto [z, mult] : cluster_values(ev_s, kDefaultClusterTol)) {
    const Mat basis = null_space(t - z * Mat::Identity(t.rows(), t.cols()), tol);
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
      r.max_variance = std::max(r.max_variance, district_variance(tree, n, basis.col(k)));
    }
  }
  r.passed = r.nonzero_count == r.expected_count && r.spectrum_mismatch <= tol &&
             r.max_variance <= 1e-10;
  return r;
}

}  // namespace nbspec
