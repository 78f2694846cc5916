#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandlab/rng.hpp"

namespace bandlab {

enum class LdeKind { Linear, BilinearOffdiag, BilinearTwoFamily };

/// Normalized large-deviation ratio for one (kind, p):
///   linear:    || sum_i b_i X_i ||_p / (sqrt(p) (sum |b_i|^2)^{1/2})
///   bilinear:  || sum a_ij X_i (X|Y)_j ||_p / (p (sum |a_ij|^2)^{1/2})
/// with a_ij = b_i c_j (rank-one coefficients keep the Monte Carlo exact and
/// cheap); p-norms are estimated over `trials` replications.
struct LdeReport {
  LdeKind kind;
  int p = 2;
  double ratio = 0.0;
  double coeff_norm = 0.0;
};

enum class LdeCoeffs { DecayingDeterministic, Random, FirstBasisVector };

inline std::vector<LdeReport> lde_validate(LdeKind kind, int n, const std::vector<int>& p_list,
                                           int trials, std::uint64_t seed,
                                           double coeff_scale = 1.0,
                                           LdeCoeffs coeffs = LdeCoeffs::DecayingDeterministic) {
  if (n < 100) throw std::invalid_argument("lde_validate: need n >= 100");
  for (int p : p_list)
    if (p < 2 || p % 2 != 0) throw std::invalid_argument("lde_validate: p must be even, >= 2");

  std::vector<double> b(n), c(n);
  switch (coeffs) {
    case LdeCoeffs::DecayingDeterministic:
      for (int i = 0; i < n; ++i) {
        b[i] = coeff_scale / std::sqrt(static_cast<double>(i + 1));
        c[i] = coeff_scale / std::sqrt(static_cast<double>(n - i));
      }
      break;
    case LdeCoeffs::Random: {
      CounterRng crng(mix_seed(seed, 0xC0EFull), 0);
      for (int i = 0; i < n; ++i) b[i] = coeff_scale * crng.next_gauss();
      for (int i = 0; i < n; ++i) c[i] = coeff_scale * crng.next_gauss();
      break;
    }
    case LdeCoeffs::FirstBasisVector:
      b.assign(n, 0.0);
      c.assign(n, 0.0);
      b[0] = coeff_scale;
      c[0] = coeff_scale;
      break;
  }
  double b2 = 0.0, a2 = 0.0, diag2 = 0.0, c2 = 0.0;
  for (int i = 0; i < n; ++i) {
    b2 += b[i] * b[i];
    c2 += c[i] * c[i];
    diag2 += b[i] * b[i] * c[i] * c[i];
  }
  a2 = b2 * c2;  // sum_{ij} (b_i c_j)^2

  std::vector<std::vector<double>> abs_vals(p_list.size());
  for (auto& v : abs_vals) v.reserve(trials);

  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    double bX = 0.0, cX = 0.0, cY = 0.0, diagXX = 0.0;
    for (int i = 0; i < n; ++i) {
      const double X = rng.next_gauss();
      bX += b[i] * X;
      cX += c[i] * X;
      diagXX += b[i] * c[i] * X * X;
    }
    if (kind == LdeKind::BilinearTwoFamily) {
      for (int i = 0; i < n; ++i) cY += c[i] * rng.next_gauss();
    }
    double value = 0.0;
    switch (kind) {
      case LdeKind::Linear:
        value = bX;
        break;
      case LdeKind::BilinearOffdiag:
        value = bX * cX - diagXX;
        break;
      case LdeKind::BilinearTwoFamily:
        value = bX * cY;
        break;
    }
    for (std::size_t ip = 0; ip < p_list.size(); ++ip) abs_vals[ip].push_back(std::abs(value));
  }

  std::vector<LdeReport> out;
  for (std::size_t ip = 0; ip < p_list.size(); ++ip) {
    const int p = p_list[ip];
    double mp = 0.0;
    for (double v : abs_vals[ip]) mp += std::pow(v, p);
    mp = std::pow(mp / trials, 1.0 / p);
    LdeReport r;
    r.kind = kind;
    r.p = p;
    if (kind == LdeKind::Linear) {
      r.coeff_norm = std::sqrt(b2);
      r.ratio = mp / (std::sqrt(static_cast<double>(p)) * r.coeff_norm);
    } else {
      const double s2 = kind == LdeKind::BilinearOffdiag ? a2 - diag2 : a2;
      r.coeff_norm = std::sqrt(s2);
      r.ratio = mp / (static_cast<double>(p) * r.coeff_norm);
    }
    out.push_back(r);
  }
  return out;
}

inline const char* lde_kind_name(LdeKind k) {
  switch (k) {
    case LdeKind::Linear:
      return "linear";
    case LdeKind::BilinearOffdiag:
      return "bilinear-offdiag";
    case LdeKind::BilinearTwoFamily:
      return "bilinear-two-family";
  }
  return "?";
}

}  // namespace bandlab
