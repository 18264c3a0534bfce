#include "asttf/toeplitz.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace asttf {

Eigen::MatrixXcd toeplitz_from_first_column(const Eigen::VectorXcd& u) {
  const Eigen::Index n = u.size();
  if (n == 0) throw std::invalid_argument("toeplitz: empty first column");
  if (std::abs(u[0].imag()) > 1e-10 * std::max(1.0, std::abs(u[0])))
    throw std::invalid_argument("toeplitz: leading entry must be real");
  Eigen::MatrixXcd T(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    T(j, j) = u[0].real();
    for (Eigen::Index k = 0; k < j; ++k) {
      T(j, k) = u[j - k];
      T(k, j) = std::conj(u[j - k]);
    }
  }
  return T;
}

Eigen::VectorXcd diag_sum(const Eigen::MatrixXcd& A) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("diag_sum: matrix must be square");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k + j < n; ++k) out[j] += A(k + j, k);
  return out;
}

Eigen::MatrixXcd psd_project(const Eigen::MatrixXcd& A) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("psd_project: matrix must be square");
  if (!A.allFinite())
    throw std::invalid_argument("psd_project: input has non-finite entries");
  const double scale = A.cwiseAbs().maxCoeff();
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, scale))
    throw std::invalid_argument("psd_project: input is not Hermitian");

  Eigen::MatrixXcd H = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_project: eigendecomposition failed");
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXcd P =
      es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (P + P.adjoint());
}

}  // namespace asttf
