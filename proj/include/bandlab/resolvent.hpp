#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <variant>

#include "bandlab/linalg.hpp"
#include "bandlab/sampling.hpp"
#include "bandlab/semicircle.hpp"
#include "bandlab/variance_matrix.hpp"

namespace bandlab {

/// One Hermitian eigendecomposition of a sample, amortized across a whole
/// z-grid: G(z) = V diag(1/(lambda - z)) V^*.
class ResolventWorkspace {
 public:
  explicit ResolventWorkspace(const SampledBandMatrix& sample) {
    if (sample.is_real())
      real_.emplace(eig_symmetric(sample.H.real()));
    else
      cplx_.emplace(eig_hermitian(sample.H));
  }

  std::int64_t size() const { return eigenvalues().size(); }

  const Eigen::VectorXd& eigenvalues() const { return real_ ? real_->w : cplx_->w; }

  /// |u_alpha(x)|^2 for eigenvector alpha
  double eigenvector_weight(Eigen::Index x, Eigen::Index alpha) const {
    return real_ ? real_->V(x, alpha) * real_->V(x, alpha) : std::norm(cplx_->V(x, alpha));
  }

  Eigen::MatrixXcd resolvent(std::complex<double> z) const {
    if (!(z.imag() >= 1e-6))
      throw std::invalid_argument("resolvent: eta must be >= 1e-6");
    const Eigen::Index n = eigenvalues().size();
    Eigen::VectorXcd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = 1.0 / (eigenvalues()[i] - z);
    if (real_) {
      // G = (V diag(Re c)) V^T + i (V diag(Im c)) V^T, two real gemms
      Eigen::MatrixXd A = real_->V;
      Eigen::MatrixXd B = real_->V;
      for (Eigen::Index j = 0; j < n; ++j) {
        A.col(j) *= c[j].real();
        B.col(j) *= c[j].imag();
      }
      Eigen::MatrixXcd G(n, n);
      G.real() = gemm_abt(A, real_->V);
      G.imag() = gemm_abt(B, real_->V);
      return G;
    }
    Eigen::MatrixXcd A = cplx_->V;
    for (Eigen::Index j = 0; j < n; ++j) A.col(j) *= c[j];
    return gemm_abh(A, cplx_->V);
  }

 private:
  std::optional<SymmetricEigen> real_;
  std::optional<HermitianEigen> cplx_;
};

/// Lambda(z) = max_{x,y} |G_xy - delta_xy m|.
inline double lambda_stat(const Eigen::MatrixXcd& G, std::complex<double> m) {
  const Eigen::Index n = G.rows();
  double mx = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::complex<double> v = i == j ? G(i, j) - m : G(i, j);
      const double a = std::norm(v);
      if (a > mx) mx = a;
    }
  return std::sqrt(mx);
}

/// T_xy = sum_i s_xi |G_iy|^2, i.e. S |G|^2 through the circulant transform.
inline Eigen::MatrixXd t_matrix(const VarianceMatrix& S, const Eigen::MatrixXcd& G) {
  Eigen::MatrixXd G2 = G.cwiseAbs2();
  return S.apply_columns(G2);
}

/// T'_xy = sum_j |G_xj|^2 s_jy = |G|^2 S.
inline Eigen::MatrixXd t_prime(const VarianceMatrix& S, const Eigen::MatrixXcd& G) {
  Eigen::MatrixXd G2 = G.cwiseAbs2();
  return S.apply_rows(G2);
}

/// Y = T S (= S T' when both come from the same G).
inline Eigen::MatrixXd y_matrix(const Eigen::MatrixXd& T, const VarianceMatrix& S) {
  return S.apply_rows(T);
}

/// Averaged vector T-bar_y = (1/N) sum_x T_xy = Im G_yy / (N eta).
inline Eigen::VectorXd t_bar(const Eigen::MatrixXcd& G, double eta) {
  const Eigen::Index n = G.rows();
  Eigen::VectorXd out(n);
  for (Eigen::Index y = 0; y < n; ++y) out[y] = G(y, y).imag() / (static_cast<double>(n) * eta);
  return out;
}

/// Self-consistent residual E = T - |m|^2 S T - |m|^2 S, with the normalized
/// size max|E| / (Psi^4 + Psi^2 M^{-1/2}), Psi = (M eta)^{-1/2}.
struct ResidualReport {
  Eigen::MatrixXd E;
  double max_abs = 0.0;
  double normalized_ratio = 0.0;
};

inline ResidualReport sc_residual(const Eigen::MatrixXd& T, const VarianceMatrix& S,
                                  std::complex<double> m, double eta) {
  const double am2 = std::norm(m);
  ResidualReport r;
  r.E = T - am2 * S.apply_columns(T) - am2 * S.dense();
  r.max_abs = r.E.cwiseAbs().maxCoeff();
  const double M = S.m_parameter();
  const double psi2 = 1.0 / (M * eta);
  r.normalized_ratio = r.max_abs / (psi2 * psi2 + psi2 / std::sqrt(M));
  return r;
}

/// max relative residual of the defining identity (H - z) G = I.
inline double resolvent_identity_residual(const Eigen::MatrixXcd& H, std::complex<double> z,
                                          const Eigen::MatrixXcd& G) {
  const Eigen::Index n = H.rows();
  Eigen::MatrixXcd R = H * G - z * G;
  R -= Eigen::MatrixXcd::Identity(n, n);
  return R.cwiseAbs().maxCoeff();
}

/// max over x of the relative residual of sum_y |G_yx|^2 = Im G_xx / eta.
inline double mass_identity_residual(const Eigen::MatrixXcd& G, double eta) {
  const Eigen::Index n = G.rows();
  double worst = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    const double lhs = G.col(x).squaredNorm();
    const double rhs = G(x, x).imag() / eta;
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  return worst;
}

}  // namespace bandlab
