#pragma once

#include <Eigen/Dense>

namespace gridflow {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Moore-Penrose pseudoinverse via SVD. Singular values below
// tol * sigma_max are treated as zero.
Matrix pinv(const Matrix& a, double tol = 1e-10);

// Orthonormal basis of ker(a); returns a cols(a) x k matrix where
// k = cols(a) - numerical rank. Full column rank yields 0 columns.
Matrix nullspace_basis(const Matrix& a, double tol = 1e-10);

// Orthogonal projection of v onto span of the columns of mb,
// mb (mb^T mb)^-1 mb^T v. Empty mb projects onto {0}.
// Throws std::runtime_error if mb^T mb is numerically singular.
Vector project_onto_columns(const Matrix& mb, const Vector& v);

}  // namespace gridflow
