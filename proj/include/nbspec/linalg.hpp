#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nbspec {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Singular values in descending order.
Eigen::VectorXd singular_values(const Mat& a);

/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const Mat& a, double rel_tol);
/// Number of singular values above abs_tol.
int numerical_rank_abs(const Mat& a, double abs_tol);

/// Orthonormal basis (columns) of the numerical null space, same threshold as
/// numerical_rank.
Mat null_space(const Mat& a, double rel_tol);

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Mat& a);

/// a^k by repeated multiplication.
Mat matrix_power(const Mat& a, int k);

}  // namespace nbspec
