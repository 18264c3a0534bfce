#pragma once

#include <Eigen/Core>
#include <complex>

namespace asttf {

// Hermitian Toeplitz matrix from its first column u: T(j, k) = u[j - k] for
// j >= k, conj(u[k - j]) above the diagonal. u[0] must be real to tolerance
// 1e-10 (relative to its magnitude); throws otherwise.
Eigen::MatrixXcd toeplitz_from_first_column(const Eigen::VectorXcd& u);

// Sums along the lower diagonals: out[j] = sum_k A(k + j, k), j = 0..n-1.
// The adjoint of toeplitz_from_first_column's lower-triangular placement, used
// to average a matrix onto Toeplitz form. A must be square.
Eigen::VectorXcd diag_sum(const Eigen::MatrixXcd& A);

// Projection onto the positive semidefinite cone: symmetrize, eigendecompose,
// clip negative eigenvalues to zero, reassemble. The input must be Hermitian
// to relative tolerance 1e-8 and finite; throws otherwise. The result is
// exactly Hermitian.
Eigen::MatrixXcd psd_project(const Eigen::MatrixXcd& A);

}  // namespace asttf
