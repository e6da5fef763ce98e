#include "nbspec/linalg.hpp"

#include <algorithm>

namespace nbspec {

namespace {

// Eigen 3.4.0's BDCSVD occasionally returns a wrong V column when exact zero
// singular values are deflated, so small matrices go through JacobiSVD and
// large null spaces are checked before use.
constexpr Eigen::Index kJacobiLimit = 160;

int count_above(const Eigen::VectorXd& s, double threshold) {
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > threshold) ++r;
  }
  return r;
}

}  // namespace

Eigen::VectorXd singular_values(const Mat& a) {
  if (a.size() == 0) return {};
  if (std::min(a.rows(), a.cols()) <= kJacobiLimit) return Eigen::JacobiSVD<Mat>(a).singularValues();
  return Eigen::BDCSVD<Mat>(a).singularValues();
}

int numerical_rank(const Mat& a, double rel_tol) {
  auto s = singular_values(a);
  if (s.size() == 0 || s[0] == 0.0) return 0;
  return count_above(s, rel_tol * s[0]);
}

int numerical_rank_abs(const Mat& a, double abs_tol) {
  return count_above(singular_values(a), abs_tol);
}

Mat null_space(const Mat& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  auto from = [&](const auto& svd) -> Mat {
    const auto& s = svd.singularValues();
    int r = (s.size() == 0 || s[0] == 0.0) ? 0 : count_above(s, rel_tol * s[0]);
    return svd.matrixV().rightCols(n - r);
  };
  if (n > kJacobiLimit) {
    Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV);
    Mat basis = from(svd);
    const double s0 = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    if (basis.cols() == 0 || max_abs(a * basis) <= 10 * rel_tol * std::max(s0, 1.0)) return basis;
  }
  return from(Eigen::JacobiSVD<Mat>(a, Eigen::ComputeFullV));
}

double max_abs(const Mat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

Mat matrix_power(const Mat& a, int k) {
  Mat p = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) p = p * a;
  return p;
}

}  // namespace nbspec
