#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <cblas.h>
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace bandlab {

/// The worker pool owns all parallelism; BLAS stays single-threaded so that
/// results cannot depend on the worker count.
inline const bool blas_single_thread_init = [] {
  openblas_set_num_threads(1);
  return true;
}();

struct HermitianEigen {
  Eigen::VectorXd w;
  Eigen::MatrixXcd V;
};

struct SymmetricEigen {
  Eigen::VectorXd w;
  Eigen::MatrixXd V;
};

inline HermitianEigen eig_hermitian(const Eigen::MatrixXcd& H) {
  HermitianEigen e;
  const lapack_int n = static_cast<lapack_int>(H.rows());
  e.V = H;
  e.w.resize(n);
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, e.V.data(), n, e.w.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return e;
}

inline SymmetricEigen eig_symmetric(const Eigen::MatrixXd& H) {
  SymmetricEigen e;
  const lapack_int n = static_cast<lapack_int>(H.rows());
  e.V = H;
  e.w.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, e.V.data(), n, e.w.data());
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
  return e;
}

/// C = A * B^H for complex column-major matrices (zgemm).
inline Eigen::MatrixXcd gemm_abh(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  const int n = static_cast<int>(A.rows()), k = static_cast<int>(A.cols()),
            m = static_cast<int>(B.rows());
  Eigen::MatrixXcd C(n, m);
  const std::complex<double> one(1, 0), zero(0, 0);
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasConjTrans, n, m, k, &one, A.data(), n, B.data(),
              m, &zero, C.data(), n);
  return C;
}

/// C = A * B^T for real matrices (dgemm).
inline Eigen::MatrixXd gemm_abt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(A.rows()), k = static_cast<int>(A.cols()),
            m = static_cast<int>(B.rows());
  Eigen::MatrixXd C(n, m);
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasTrans, n, m, k, 1.0, A.data(), n, B.data(), m,
              0.0, C.data(), n);
  return C;
}

}  // namespace bandlab
