#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandlab/resolvent.hpp"

namespace bandlab {

/// Localization census over the eigenvectors with eigenvalue in
/// I = [-2+kappa, 2-kappa]: alpha is counted localized at scale ell when
/// sum_x |u_alpha(x)| * ||P_{x,ell} u_alpha|| <= eps, with P_{x,ell} the
/// projection onto torus distance >= ell from x.
struct DelocalizationStats {
  double fraction = 0.0;              // |A_{eps,ell}| / N
  std::int64_t in_window = 0;         // eigenvalues inside I
  std::vector<double> membership_sum; // the localization sum per in-window vector
  std::vector<double> ipr;            // sum_x |u(x)|^4 per in-window vector
};

/// d = 1 only (ring geometry); the window mass uses a sliding circular sum,
/// O(N) per eigenvector.
inline DelocalizationStats eigen_deloc(const ResolventWorkspace& ws, double kappa, double eps,
                                       std::int64_t ell) {
  const std::int64_t N = ws.size();
  if (!(ell >= 1 && ell < N / 2)) throw std::invalid_argument("eigen_deloc: need 1 <= ell < N/2");
  if (!(eps > 0.0)) throw std::invalid_argument("eigen_deloc: eps must be positive");

  DelocalizationStats out;
  std::vector<double> p(N), absu(N);
  std::int64_t localized = 0;
  for (std::int64_t a = 0; a < N; ++a) {
    const double lam = ws.eigenvalues()[a];
    if (lam < -2.0 + kappa || lam > 2.0 - kappa) continue;
    ++out.in_window;
    double ipr = 0.0;
    for (std::int64_t x = 0; x < N; ++x) {
      p[x] = ws.eigenvector_weight(x, a);
      absu[x] = std::sqrt(p[x]);
      ipr += p[x] * p[x];
    }
    out.ipr.push_back(ipr);
    // window(x) = sum of p over torus distance < ell of x (width 2*ell-1)
    double window = p[0];
    for (std::int64_t r = 1; r < ell; ++r) window += p[r] + p[N - r];
    double sum = 0.0;
    for (std::int64_t x = 0; x < N; ++x) {
      sum += absu[x] * std::sqrt(std::max(0.0, 1.0 - window));
      // slide window from x to x+1
      const std::int64_t add = (x + ell) % N;
      const std::int64_t drop = ((x - ell + 1) % N + N) % N;
      window += p[add] - p[drop];
    }
    out.membership_sum.push_back(sum);
    if (sum <= eps) ++localized;
  }
  out.fraction = static_cast<double>(localized) / static_cast<double>(N);
  return out;
}

}  // namespace bandlab
