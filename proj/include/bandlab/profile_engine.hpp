#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bandlab/potentials.hpp"
#include "bandlab/quadrature.hpp"
#include "bandlab/semicircle.hpp"
#include "bandlab/variance_matrix.hpp"

namespace bandlab {

enum class ThetaMethod { DenseSolve, CirculantDft, GeometricSeries };

/// A column of the deterministic diffusion profile Theta = |m|^2 S / (1 - |m|^2 S),
/// with the provenance of the method that produced it.
struct DiffusionProfile {
  ThetaMethod method = ThetaMethod::CirculantDft;
  std::int64_t y = 0;          // which column
  Eigen::VectorXd column;      // Theta_{x,y} for all x
  double tail_bound = 0.0;     // analytic truncation bound (geometric series only)
};

/// Fourier symbol of S on the dual lattice, with the band-rescaled view
/// S_W(q) = S_hat(q/W).
struct FourierSymbol {
  Eigen::ArrayXd values;  // S_hat(p) over the dual lattice, torus layout
  int W = 1;

  double max_offzero_abs() const {
    double m = 0.0;
    for (Eigen::Index i = 1; i < values.size(); ++i) m = std::max(m, std::abs(values[i]));
    return m;
  }
};

inline FourierSymbol s_hat(const VarianceMatrix& S) {
  return FourierSymbol{S.spectrum(), S.profile().W};
}

/// S_W(q) = sum_x exp(-i q . x / W) s_{x0} by direct summation (independent
/// of the FFT path; q in band-rescaled units, any real vector).
inline double s_hat_w_direct(const VarianceMatrix& S, const std::vector<double>& q) {
  const auto& lat = S.lattice();
  const int d = lat.dimension();
  if (static_cast<int>(q.size()) != d)
    throw std::invalid_argument("s_hat_w_direct: q dimension mismatch");
  const double W = static_cast<double>(S.profile().W);
  double acc = 0.0;
  for (std::int64_t x = 0; x < S.size(); ++x) {
    const std::vector<int> r = lat.site_rep(x);
    double phase = 0.0;
    for (int k = 0; k < d; ++k) phase += q[k] * r[k] / W;
    acc += std::cos(phase) * S.row()[x];
  }
  return acc;
}

/// Unrenormalized diffusion constant: D_ij = (1/2) sum_x x_i x_j s_{x0} / W^2.
struct DiffusionConstant {
  Eigen::MatrixXd D;
  bool degenerate = false;
  double scalar() const { return D(0, 0); }
};

inline DiffusionConstant diffusion_constant(const VarianceMatrix& S) {
  const auto& lat = S.lattice();
  const int d = lat.dimension();
  const double W = static_cast<double>(S.profile().W);
  DiffusionConstant out;
  out.D = Eigen::MatrixXd::Zero(d, d);
  for (std::int64_t x = 0; x < S.size(); ++x) {
    const std::vector<int> r = lat.site_rep(x);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.D(i, j) += 0.5 * r[i] * r[j] / (W * W) * S.row()[x];
  }
  out.degenerate = out.D.determinant() < 1e-12;
  return out;
}

/// gap = 1 - max_{p != 0} |S_hat(p)|, plus the scaling record the gap lemmas
/// predict: gap (L/W)^2 for rapid decay, gap (N/W)^beta for the heavy tail.
struct SpectralGap {
  double gap = 0.0;
  double normalized_ratio = 0.0;
};

inline SpectralGap spectral_gap(const VarianceMatrix& S) {
  SpectralGap g;
  g.gap = 1.0 - s_hat(S).max_offzero_abs();
  const double L = static_cast<double>(S.lattice().side());
  const double W = static_cast<double>(S.profile().W);
  if (S.profile().kind == ProfileKind::HeavyTail)
    g.normalized_ratio = g.gap * std::pow(static_cast<double>(S.size()) / W, S.profile().beta);
  else
    g.normalized_ratio = g.gap * (L / W) * (L / W);
  return g;
}

// ---------------------------------------------------------------------------
// exact Theta, three routes

/// Dense solve: one linear system (1 - |m|^2 S) column = |m|^2 S e_y.
inline DiffusionProfile theta_exact_dense(const VarianceMatrix& S, std::complex<double> z,
                                          std::int64_t y = 0) {
  if (!(z.imag() >= 1e-8))
    throw std::invalid_argument("theta_exact_dense: eta below 1e-8 rejected (near-singular)");
  const std::int64_t N = S.size();
  const double am2 = std::norm(msc(z));
  Eigen::MatrixXd Sd = S.dense();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N) - am2 * Sd;
  Eigen::VectorXd rhs = am2 * Sd.col(y);
  DiffusionProfile p;
  p.method = ThetaMethod::DenseSolve;
  p.y = y;
  p.column = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(rhs);
  return p;
}

/// Circulant route: Theta_{x0} = idft of |m|^2 S_hat / (1 - |m|^2 S_hat).
inline DiffusionProfile theta_exact_dft(const VarianceMatrix& S, std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("theta_exact_dft: Im z must be positive");
  const double am2 = std::norm(msc(z));
  const Eigen::ArrayXd& sh = S.spectrum();
  Eigen::VectorXcd vals(sh.size());
  for (Eigen::Index i = 0; i < sh.size(); ++i) vals[i] = am2 * sh[i] / (1.0 - am2 * sh[i]);
  DiffusionProfile p;
  p.method = ThetaMethod::CirculantDft;
  p.y = 0;
  p.column = torus_idft(vals, S.lattice()).real();
  return p;
}

/// Geometric series sum_{n=1}^{n_max} |m|^{2n} (S^n)_{xy} with the analytic
/// tail bound |m|^{2(n_max+1)} / (1 - |m|^2).
inline DiffusionProfile theta_series(const VarianceMatrix& S, std::complex<double> z, int n_max,
                                     std::int64_t y = 0) {
  if (n_max < 1) throw std::invalid_argument("theta_series: n_max must be >= 1");
  const std::int64_t N = S.size();
  const double am2 = std::norm(msc(z));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
  v[y] = 1.0;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(N);
  double w = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    v = S.apply(v);
    w *= am2;
    acc += w * v;
  }
  DiffusionProfile p;
  p.method = ThetaMethod::GeometricSeries;
  p.y = y;
  p.column = acc;
  p.tail_bound = std::pow(am2, n_max + 1) / (1.0 - am2);
  return p;
}

// ---------------------------------------------------------------------------
// closed-form approximations theta

/// d = 1 closed form, both routes of Eq.-level Poisson summation:
///   momentum: (|m|^2/N) sum_{p in (2pi/N)Z} e^{ipx} / (alpha eta + W^2 D p^2)
///   poisson:  (|m|^2raw/(2W sqrt(D alpha eta))) sum_k exp(-sqrt(alpha eta)|x+kN|/(W sqrt D))
struct ThetaClosed1d {
  double E, eta, W, N, D;
  double abs_m_sq, alpha;

  ThetaClosed1d(std::complex<double> z, double W_, double N_, double D_)
      : E(z.real()), eta(z.imag()), W(W_), N(N_), D(D_) {
    abs_m_sq = std::norm(msc(z));
    alpha = alpha_energy(E);
  }

  double poisson(double x) const {
    const double rate = std::sqrt(alpha * eta) / (W * std::sqrt(D));
    const double pref = abs_m_sq / (2.0 * W * std::sqrt(D * alpha * eta));
    double sum = std::exp(-rate * std::abs(x));
    for (int k = 1; k < 1000000; ++k) {
      const double t = std::exp(-rate * std::abs(x + k * N)) + std::exp(-rate * std::abs(x - k * N));
      sum += t;
      if (t < 1e-16 * sum) break;
    }
    return pref * sum;
  }

  double momentum(double x) const {
    const double c = alpha * eta;
    const double d2 = W * W * D * std::pow(2.0 * std::numbers::pi / N, 2.0);
    double sum = 1.0 / c;
    // symmetric mode pairs; tail of the k-sum is bounded by 2/(d2 k)
    const double target = 1e-13 * sum;
    const std::int64_t k_max =
        std::max<std::int64_t>(1000, static_cast<std::int64_t>(2.0 / (d2 * target)) + 1);
    const double a = 2.0 * std::numbers::pi * x / N;
    for (std::int64_t k = 1; k <= k_max; ++k) {
      sum += 2.0 * std::cos(a * k) / (c + d2 * static_cast<double>(k) * k);
    }
    return abs_m_sq * sum / N;
  }
};

/// d in {2,3} closed form via Poisson summation and the smoothed Yukawa:
/// (|m|^2 (alpha eta)^{d/2-1} / (W^d sqrt(det D)))
///     sum_k (V * phi_t)(sqrt(alpha eta) D^{-1/2}(x + kL) / W),  t = sqrt(alpha eta).
inline double theta_closed_dd(const std::vector<double>& x, std::complex<double> z, double W,
                              int L, const Eigen::MatrixXd& D, double quad_tol = 1e-9) {
  const int d = static_cast<int>(x.size());
  if (d != 2 && d != 3) throw std::invalid_argument("theta_closed_dd: d must be 2 or 3");
  const double eta = z.imag();
  const double al = alpha_energy(z.real());
  const double am2 = std::norm(msc(z));
  const double t = std::sqrt(al * eta);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("theta_closed_dd: D must be positive definite");
  const Eigen::MatrixXd Dinv_half = es.operatorInverseSqrt();
  const double pref =
      am2 * std::pow(al * eta, 0.5 * d - 1.0) / (std::pow(W, d) * std::sqrt(D.determinant()));

  Eigen::VectorXd xv(d);
  for (int i = 0; i < d; ++i) xv[i] = x[i];
  double sum = 0.0;
  for (int shell = 0; shell < 64; ++shell) {
    double shell_sum = 0.0;
    std::vector<int> k(d, -shell);
    // iterate over the boundary of the cube [-shell, shell]^d
    while (true) {
      bool boundary = false;
      for (int i = 0; i < d; ++i) boundary |= std::abs(k[i]) == shell;
      if (boundary) {
        Eigen::VectorXd u = xv;
        for (int i = 0; i < d; ++i) u[i] += static_cast<double>(k[i]) * L;
        const double arg = t * (Dinv_half * u).norm() / W;
        shell_sum += yukawa_smoothed(d, arg, t, quad_tol);
      }
      int i = 0;
      while (i < d && ++k[i] > shell) k[i++] = -shell;
      if (i == d) break;
    }
    sum += shell_sum;
    if (shell > 0 && shell_sum < 1e-16 * sum) break;
  }
  return pref * sum;
}

/// Heavy-tail superdiffusive closed form (k = 0 term, as in the asymptotic):
/// (|m|^2/(W alpha eta)) (alpha eta / B)^{1/beta} V[(alpha eta / B)^{1/beta} x / W].
inline double theta_heavy_tail(double x, std::complex<double> z, double W, double beta, double B) {
  if (!(beta > 1.0 && beta < 2.0))
    throw std::invalid_argument("theta_heavy_tail: beta must lie in (1,2)");
  const double eta = z.imag();
  const double al = alpha_energy(z.real());
  const double am2 = std::norm(msc(z));
  const double s = std::pow(al * eta / B, 1.0 / beta);
  return am2 / (W * al * eta) * s * v_beta(s * x / W, beta);
}

/// B = h0 (W/Z) int (1-cos u)/|u|^{1+beta} du, the superdiffusive analogue of
/// the diffusion constant.
inline double heavy_tail_b_constant(const VarianceMatrix& S) {
  const auto& p = S.profile();
  if (p.kind != ProfileKind::HeavyTail)
    throw std::invalid_argument("heavy_tail_b_constant: rapid-decay profile");
  return p.h0 * (static_cast<double>(p.W) / S.normalization()) * one_minus_cos_integral(p.beta);
}

/// Mean-field closed profile. Exact flat background plus the Poisson hump
/// with alpha*eta -> aeff = (1-eps) alpha eta + eps; the hump's own p = 0
/// weight is subtracted so the total mass matches Im m/(N eta) exactly.
inline double theta_mean_field(double x, std::complex<double> z, double W, double N, double D,
                               double eps) {
  if (!(eps >= 0.0 && eps <= 0.5))
    throw std::invalid_argument("theta_mean_field: epsilon must lie in [0, 1/2]");
  const double eta = z.imag();
  const std::complex<double> m = msc(z);
  const double am2 = std::norm(m);
  const double al = alpha_energy(z.real());
  const double aeff = (1.0 - eps) * al * eta + eps;
  const double rate = std::sqrt(aeff / ((1.0 - eps) * D)) / W;
  double hump = std::exp(-rate * std::abs(x));
  for (int k = 1; k < 1000000; ++k) {
    const double t = std::exp(-rate * std::abs(x + k * N)) + std::exp(-rate * std::abs(x - k * N));
    hump += t;
    if (t < 1e-16 * hump) break;
  }
  const double flat = m.imag() / (N * eta) - am2 * (1.0 - eps) / (N * aeff);
  return flat + am2 * std::sqrt(1.0 - eps) / (2.0 * W * std::sqrt(D * aeff)) * hump;
}

/// d >= 2 envelope of the diffusion-profile theorem.
inline double upsilon_dd(const std::vector<double>& x, std::complex<double> z, double W,
                         const Eigen::MatrixXd& D, int K = 4) {
  const int d = static_cast<int>(x.size());
  const double eta = z.imag();
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("upsilon_dd: eta must be in (0,1]");
  const double al = alpha_energy(z.real());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  const Eigen::MatrixXd Dinv_half = es.operatorInverseSqrt();
  Eigen::VectorXd xv(d);
  for (int i = 0; i < d; ++i) xv[i] = x[i];
  const double r = xv.norm();
  const double arg = std::sqrt(al * eta) * (Dinv_half * xv).norm() / W;
  const double wd = std::pow(W, d);
  return std::pow(eta, 0.5 * d - 1.0) / wd * yukawa_smoothed(d, arg, std::sqrt(eta)) +
         std::pow(jbracket(r / W), -K) / wd +
         std::pow(eta, 0.5 * d) / wd * std::pow(jbracket(std::sqrt(eta) * r / W), -K);
}

}  // namespace bandlab
