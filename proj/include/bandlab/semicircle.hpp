#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace bandlab {

/// Stieltjes transform of the semicircle law: the root of m^2 + zm + 1 = 0
/// with Im m > 0. The root is selected by sign, not by trusting a principal
/// branch of sqrt(z^2-4), which avoids branch-cut trouble near E = +-2.
inline std::complex<double> msc(std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("msc: Im z must be positive");
  const std::complex<double> s = std::sqrt(z * z - 4.0);
  const std::complex<double> m1 = 0.5 * (-z + s);
  const std::complex<double> m2 = 0.5 * (-z - s);
  return m1.imag() > 0.0 ? m1 : m2;
}

/// alpha(E) = 2/sqrt(4 - E^2), the leading-order coefficient in
/// |m|^2 = 1 - alpha*eta + O(eta^2).
inline double alpha_energy(double E) {
  if (!(std::abs(E) < 2.0)) throw std::invalid_argument("alpha_energy: |E| must be < 2");
  return 2.0 / std::sqrt(4.0 - E * E);
}

/// Spectral point z = E + i*eta together with the domain constants; the
/// domain S(kappa, gamma) requires -2+kappa <= E <= 2-kappa and
/// M^{gamma-1} <= eta <= 10.
struct SpectralParameter {
  double E = 0.0;
  double eta = 1.0;
  double kappa = 0.1;
  double gamma = 0.1;
  double M = 1.0;

  std::complex<double> z() const { return {E, eta}; }
  double eta_floor() const { return std::pow(M, gamma - 1.0); }
  bool in_domain() const {
    return E >= -2.0 + kappa && E <= 2.0 - kappa && eta >= eta_floor() && eta <= 10.0;
  }
};

/// m(z) and the derived scalars used all over the deterministic side.
struct SemicircleData {
  std::complex<double> m;
  double alpha = 0.0;
  double im_m = 0.0;
  double abs_m_sq = 0.0;

  static SemicircleData at(std::complex<double> z) {
    SemicircleData d;
    d.m = msc(z);
    d.alpha = std::abs(z.real()) < 2.0 ? alpha_energy(z.real()) : 0.0;
    d.im_m = d.m.imag();
    d.abs_m_sq = std::norm(d.m);
    return d;
  }

  /// residual of m + 1/m + z = 0
  double cubic_residual(std::complex<double> z) const { return std::abs(m + 1.0 / m + z); }
  /// residual of 1 - |m|^2 = eta |m|^2 / Im m
  double mass_residual(double eta) const {
    return std::abs(1.0 - abs_m_sq - eta * abs_m_sq / im_m);
  }
};

/// Phi^2 = max{ 1/(N eta), 1/(W sqrt(eta)) }
inline double control_phi2(double N, double W, double eta) {
  if (!(N > 0 && W > 0 && eta > 0)) throw std::invalid_argument("control_phi2: args must be > 0");
  return std::max(1.0 / (N * eta), 1.0 / (W * std::sqrt(eta)));
}

/// Phi_eps^2 = max{ 1/(N eta), 1/(W sqrt(eps + eta)) }
inline double control_phi_eps2(double N, double W, double eta, double eps) {
  if (!(N > 0 && W > 0 && eta > 0 && eps >= 0))
    throw std::invalid_argument("control_phi_eps2: invalid arguments");
  return std::max(1.0 / (N * eta), 1.0 / (W * std::sqrt(eps + eta)));
}

/// admissibility window M^{-1/2} <= Psi <= M^{-gamma/2}
inline bool psi_admissible(double psi, double M, double gamma) {
  return psi >= std::pow(M, -0.5) && psi <= std::pow(M, -gamma / 2.0);
}

/// Japanese bracket <x> = sqrt(1 + x^2)
inline double jbracket(double x) { return std::sqrt(1.0 + x * x); }

/// d = 1 envelope
///   Upsilon_xy = 1/(N eta) + exp(-sqrt(alpha eta) r / (W sqrt(D)))/(W sqrt(eta))
///              + <sqrt(eta) r / W>^{-K} / W,   r = |x-y|_N.
inline double upsilon_1d(double dist, double E, double eta, double W, double N, double D,
                         int K = 4) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("upsilon_1d: eta must be in (0,1]");
  if (K < 1) throw std::invalid_argument("upsilon_1d: K must be >= 1");
  const double al = alpha_energy(E);
  const double r = std::abs(dist);
  return 1.0 / (N * eta) +
         std::exp(-std::sqrt(al * eta) * r / (W * std::sqrt(D))) / (W * std::sqrt(eta)) +
         std::pow(jbracket(std::sqrt(eta) * r / W), -K) / W;
}

}  // namespace bandlab
