#pragma once

#include <vector>

#include <Eigen/Dense>

namespace biset {

using Matrix = Eigen::MatrixXd;

/// Determinant by Gaussian elimination with partial pivoting.
double determinant(Matrix m);

/// Singular values in descending order.
std::vector<double> singular_values(const Matrix& m);

/// Number of singular values strictly above rel_tol·σ_max; 0 for the zero matrix.
/// Throws PreconditionError unless 0 < rel_tol < 1.
int numeric_rank(const Matrix& m, double rel_tol);

}  // namespace biset
