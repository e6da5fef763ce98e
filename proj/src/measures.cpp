#include "nbspec/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbspec/error.hpp"
#include "nbspec/operators.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

namespace {

double scale_of(double v) { return std::max(1.0, v); }

Vec unit_square(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double re = unit(rng);
    v[i] = cplx(re, unit(rng));
  }
  return v;
}

Mat gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = normal(rng);
      m(i, j) = cplx(re, normal(rng));
    }
  }
  return m;
}

Mat random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Mat> qr(gaussian(n, n, rng));
  return qr.householderQ() * Mat::Identity(n, n);
}

}  // namespace

MeasureTable::MeasureTable(std::shared_ptr<const DistrictTree> tree, int depth)
    : tree_(std::move(tree)) {
  if (depth < 1 || depth > tree_->depth()) {
    throw Error(ErrorCode::DepthTooShallow, "measure depth " + std::to_string(depth) +
                                                " not available in the code tree");
  }
  for (int n = 1; n <= depth; ++n) levels_.push_back(Vec::Zero(tree_->size(n)));
}

MeasureTable MeasureTable::from_leaves(std::shared_ptr<const DistrictTree> tree, int depth,
                                       const Vec& leaves) {
  MeasureTable mu(std::move(tree), depth);
  if (leaves.size() != mu.level(depth).size()) {
    throw Error(ErrorCode::ShapeMismatch, "leaf vector does not match W_depth");
  }
  mu.level(depth) = leaves;
  for (int n = depth - 1; n >= 1; --n) {
    for (int i = 0; i < mu.tree().size(n + 1); ++i) {
      mu.level(n)[mu.tree().parent(n + 1, i)] += mu.level(n + 1)[i];
    }
  }
  return mu;
}

double MeasureTable::additivity_residual() const {
  double worst = 0;
  for (int n = 1; n < depth(); ++n) {
    Vec sums = Vec::Zero(levels_[n - 1].size());
    for (int i = 0; i < tree_->size(n + 1); ++i) sums[tree_->parent(n + 1, i)] += value(n + 1, i);
    worst = std::max(worst, nbspec::max_abs(sums - levels_[n - 1]));
  }
  return worst;
}

double MeasureTable::max_abs() const {
  double worst = 0;
  for (const auto& v : levels_) worst = std::max(worst, nbspec::max_abs(v));
  return worst;
}

nlohmann::json MeasureTable::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (int n = 1; n <= depth(); ++n) {
    for (int i = 0; i < tree_->size(n); ++i) {
      entries.push_back({{"code", tree_->code_vector(n, i)},
                         {"value", {value(n, i).real(), value(n, i).imag()}}});
    }
  }
  return {{"depth", depth()}, {"entries", entries}};
}

MeasureTable MeasureTable::from_json(std::shared_ptr<const DistrictTree> tree,
                                     const nlohmann::json& j) {
  try {
    MeasureTable mu(std::move(tree), j.at("depth").get<int>());
    for (const auto& entry : j.at("entries")) {
      auto code = entry.at("code").get<std::vector<int>>();
      auto value = entry.at("value").get<std::vector<double>>();
      if (value.size() != 2 || code.empty() || static_cast<int>(code.size()) > mu.depth()) {
        throw Error(ErrorCode::Parse, "malformed measure entry");
      }
      auto idx = mu.tree().find(code);
      if (!idx) throw Error(ErrorCode::Parse, "measure entry is not a postal code");
      mu.set(static_cast<int>(code.size()), *idx, cplx(value[0], value[1]));
    }
    return mu;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("measure json: ") + e.what());
  }
}

MeasureTable measure_from_edge_function(std::shared_ptr<const DistrictTree> tree, const Vec& f,
                                        cplx z, int depth, double tol) {
  require_nonzero(z);
  const Graph& g = tree->graph();
  if (f.size() != g.edge_count()) {
    throw Error(ErrorCode::ShapeMismatch, "edge function has the wrong length");
  }
  const Vec residual = turn_sum(g).matrix * f - z * f;
  if (nbspec::max_abs(residual) > tol * scale_of(nbspec::max_abs(f))) {
    throw Error(ErrorCode::NotEigen, "edge function is not in null(S - z)");
  }
  MeasureTable mu(std::move(tree), depth);
  const DistrictTree& t = mu.tree();
  for (int n = 1; n <= depth; ++n) {
    const cplx factor = std::pow(z, 1 - n);
    for (int i = 0; i < t.size(n); ++i) mu.set(n, i, factor * f[g.opposite(t.last_edge(n, i))]);
  }
  return mu;
}

MeasureTable dual_transfer_apply(const MeasureTable& mu) {
  if (mu.depth() < 2) throw Error(ErrorCode::DepthTooShallow, "dual transfer needs depth >= 2");
  const DistrictTree& t = mu.tree();
  const Graph& g = t.graph();
  MeasureTable out(mu.tree_ptr(), mu.depth());
  for (int e = 0; e < g.edge_count(); ++e) {
    cplx sum = 0;
    for (int a : g.successors(e)) sum += mu.value(1, a);
    out.set(1, e, sum);
  }
  for (int n = 2; n <= mu.depth(); ++n) {
    for (int i = 0; i < t.size(n); ++i) out.set(n, i, mu.value(n - 1, t.tail(n, i)));
  }
  return out;
}

double dual_eigen_residual(const MeasureTable& mu, cplx z) {
  const auto image = dual_transfer_apply(mu);
  double worst = 0;
  for (int n = 1; n <= mu.depth(); ++n) {
    worst = std::max(worst, max_abs(image.level(n) - z * mu.level(n)));
  }
  return worst;
}

cplx pairing(const DependsFunction& phi, const MeasureTable& mu) {
  if (phi.depth > mu.depth()) {
    throw Error(ErrorCode::DepthTooShallow, "function is deeper than the measure table");
  }
  if (phi.values.size() != mu.level(phi.depth).size()) {
    throw Error(ErrorCode::ShapeMismatch, "function size does not match W_n");
  }
  return (phi.values.array() * mu.level(phi.depth).array()).sum();
}

MeasureTable random_measure(std::shared_ptr<const DistrictTree> tree, int depth,
                            std::mt19937_64& rng) {
  const auto n = tree->size(depth);
  return MeasureTable::from_leaves(std::move(tree), depth, unit_square(n, rng));
}

DualityReport transfer_duality_check(std::shared_ptr<const DistrictTree> tree, int depth,
                                     int trials, std::uint64_t seed) {
  if (depth < 3) throw Error(ErrorCode::DepthTooShallow, "duality check needs depth >= 3");
  if (depth > tree->depth()) throw Error(ErrorCode::DepthTooShallow, "tree too shallow");
  const DistrictTree& t = *tree;
  DualityReport r;
  r.depth = depth;
  r.trials = trials;

  for (int n = 2; n < depth; ++n) {
    for (int d = 0; d < t.size(n); ++d) {
      DependsFunction ind{n, Vec::Zero(t.size(n))};
      ind.values[d] = 1.0;
      auto image = apply_transfer(t, ind);
      Vec expected = Vec::Zero(t.size(n - 1));
      expected[t.tail(n, d)] = 1.0;
      ++r.indicator_checks;
      if (image.values != expected) ++r.indicator_failures;
    }
  }

  std::mt19937_64 rng(seed);
  for (int k = 0; k < trials; ++k) {
    auto phi = random_function(t, depth - 1, rng);
    auto mu = random_measure(tree, depth, rng);
    cplx lhs = pairing(apply_transfer(t, phi), mu);
    cplx rhs = pairing(phi, dual_transfer_apply(mu));
    r.max_duality_residual =
        std::max(r.max_duality_residual, std::abs(lhs - rhs) / scale_of(std::abs(lhs)));
    cplx deep = pairing(lift(t, phi, depth), mu);
    cplx shallow = pairing(phi, mu);
    r.max_representation_residual = std::max(
        r.max_representation_residual, std::abs(deep - shallow) / scale_of(std::abs(shallow)));
  }
  return r;
}

Vec canonical_transpose(const MeasureTable& mu, cplx z, double tol) {
  if (mu.depth() < 2) {
    throw Error(ErrorCode::DepthTooShallow, "eigen relation needs depth >= 2");
  }
  if (dual_eigen_residual(mu, z) > tol * scale_of(mu.max_abs())) {
    throw Error(ErrorCode::NotEigen, "measure is not a dual eigenmeasure at z");
  }
  const Graph& g = mu.tree().graph();
  Vec f(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) f[e] = mu.value(1, g.opposite(e));
  return f;
}

Mat edge_form(const Graph& g) {
  Mat p = Mat::Zero(g.edge_count(), g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) p(e, g.opposite(e)) = 1.0;
  return p;
}

double edge_form_symmetry_residual(const Graph& g, int trials, std::mt19937_64& rng) {
  const Mat s = turn_sum(g).matrix;
  const Mat p = edge_form(g);
  double worst = 0;
  for (int k = 0; k < trials; ++k) {
    Vec f = unit_square(g.edge_count(), rng);
    Vec h = unit_square(g.edge_count(), rng);
    cplx lhs = (s * f).transpose() * p * h;
    cplx rhs = f.transpose() * p * (s * h);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

DegeneracyVerdict degeneracy_test(const Graph& g, cplx z, double tol) {
  require_nonzero(z);
  const Mat s = turn_sum(g).matrix;
  const Mat basis = null_space(s - z * Mat::Identity(s.rows(), s.cols()), tol);
  if (basis.cols() == 0) throw Error(ErrorCode::NotEigen, "z is not an eigenvalue of S");

  auto tree = std::make_shared<const DistrictTree>(g, 2);
  const int d = static_cast<int>(basis.cols());
  Mat gram(d, d);
  for (int j = 0; j < d; ++j) {
    auto mu = measure_from_edge_function(tree, basis.col(j), z, 2, tol);
    for (int i = 0; i < d; ++i) gram(i, j) = pairing({1, basis.col(i)}, mu);
  }

  DegeneracyVerdict v;
  v.z = z;
  v.dimension = d;
  v.form_residual = max_abs(gram - basis.transpose() * edge_form(g) * basis);
  v.gram_rank = numerical_rank_abs(gram, tol);
  v.degenerate = v.gram_rank < d;
  v.jordan_block = jordan_detect(s, z, tol);
  v.agrees = v.degenerate == (v.jordan_block > 1);
  return v;
}

int AdjointPair::max_block() const { return *std::max_element(blocks.begin(), blocks.end()); }

AdjointPair make_planted_pair(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> block_count(1, 3), block_size(1, 3), extra(1, 3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), angle(0.0, 6.283185307179586);

  AdjointPair pair;
  double re = unit(rng);
  pair.lambda = cplx(re, unit(rng));
  const int nb = block_count(rng);
  for (int b = 0; b < nb; ++b) pair.blocks.push_back(block_size(rng));
  int planted = 0;
  for (int b : pair.blocks) planted += b;
  const int others = extra(rng);
  const int n = planted + others;

  Mat j = Mat::Zero(n, n);
  int pos = 0;
  for (int b : pair.blocks) {
    for (int k = 0; k < b; ++k) {
      j(pos + k, pos + k) = pair.lambda;
      if (k + 1 < b) j(pos + k, pos + k + 1) = 1.0;
    }
    pos += b;
  }
  // Remaining eigenvalues on a ray from lambda, 0.7 apart.
  const cplx dir = std::polar(1.0, angle(rng));
  for (int k = 0; k < others; ++k, ++pos) j(pos, pos) = pair.lambda + 0.7 * (k + 1) * dir;

  const Mat q = random_unitary(n, rng);
  pair.a = q * j * q.adjoint();

  Eigen::VectorXcd spread(n);
  std::uniform_real_distribution<double> mag(1.0, 2.0);
  for (int i = 0; i < n; ++i) spread[i] = mag(rng);
  pair.m = random_unitary(n, rng) * spread.asDiagonal() * random_unitary(n, rng);
  pair.a_dual = pair.m.inverse() * pair.a.transpose() * pair.m;
  return pair;
}

SyntheticVerdict synthetic_degeneracy(const AdjointPair& pair, double tol) {
  const Eigen::Index n = pair.a.rows();
  const Mat id = Mat::Identity(n, n);
  SyntheticVerdict v;
  v.jordan = jordan_detect(pair.a, pair.lambda, tol);
  v.jordan_dual = jordan_detect(pair.a_dual, pair.lambda, tol);

  auto gram = [&](const Mat& right, const Mat& left) -> Mat {
    return (pair.m * left).transpose() * right;
  };
  const Mat phi = null_space(pair.a - pair.lambda * id, tol);
  const Mat psi = null_space(pair.a_dual - pair.lambda * id, tol);
  v.eigen_dimension = static_cast<int>(std::min(phi.cols(), psi.cols()));
  v.eigen_gram_rank = numerical_rank_abs(gram(phi, psi), tol);

  const Mat gphi = generalized_eigenspace(pair.a, pair.lambda, v.jordan, tol);
  const Mat gpsi = generalized_eigenspace(pair.a_dual, pair.lambda, v.jordan_dual, tol);
  v.generalized_dimension = static_cast<int>(std::min(gphi.cols(), gpsi.cols()));
  v.generalized_gram_rank = numerical_rank_abs(gram(gphi, gpsi), tol);
  return v;
}

ExtensionReport extension_bound_check(const MeasureTable& mu, cplx z, double theta, int n,
                                      int trials, std::mt19937_64& rng) {
  const DistrictTree& t = mu.tree();
  const Graph& g = t.graph();
  const double qmax = g.q_max();
  if (!(std::abs(z) > theta * qmax)) {
    throw Error(ErrorCode::InvalidArgument, "extension bound needs |z| > theta * q_max");
  }
  if (n > mu.depth()) throw Error(ErrorCode::DepthTooShallow, "function deeper than measure");
  const auto pref = PreferredContinuation::smallest_successor(g);
  const Mat pi1 = projection_pi(t, 1, n, pref);
  const double edge_max = max_abs(mu.level(1));
  const double factor = g.vertex_count() * qmax * edge_max / (1.0 - theta * qmax / std::abs(z));

  ExtensionReport r;
  r.z = z;
  r.theta = theta;
  r.trials = trials;
  for (int k = 0; k < trials; ++k) {
    auto phi = random_function(t, n, rng);
    DependsFunction coarse{1, pi1 * phi.values};
    double diff = std::abs(pairing(phi, mu) - pairing(coarse, mu));
    double bound = lipschitz_seminorm(t, phi, 1, theta) * factor;
    double ratio = bound > 0 ? diff / bound : (diff > 1e-12 ? 1e300 : 0.0);
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    if (diff > bound * (1 + 1e-12) + 1e-12) ++r.violations;
  }
  return r;
}

}  // namespace nbspec
