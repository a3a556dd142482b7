#pragma once

// Independent reference computations for tests: Eigen's complex solvers stand
// in for the library's Jacobi and interior-point code.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "cbk/matrix.hpp"

namespace oracle {

inline Eigen::MatrixXcd to_eigen(const cbk::ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline cbk::ComplexMatrix from_eigen(const Eigen::MatrixXcd& e) {
  cbk::ComplexMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline double min_eigenvalue(const cbk::ComplexMatrix& h) {
  if (h.rows() == 0) return 0.0;
  const Eigen::MatrixXcd e = to_eigen(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (e + e.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline bool is_psd(const cbk::ComplexMatrix& h, double tol) { return oracle::min_eigenvalue(h) >= -tol; }

inline double spectral_norm(const cbk::ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(to_eigen(m)).singularValues()(0);
}

}  // namespace oracle
