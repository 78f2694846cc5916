#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bandlab {

namespace detail {
template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson on [a, b].
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-12, int max_depth = 40) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Adaptive integration with panels no wider than `max_panel`; used for
/// oscillatory integrands where a single adaptive pass can step over lobes.
template <class F>
double integrate_paneled(const F& f, double a, double b, double max_panel, double tol = 1e-12) {
  if (b <= a) return 0.0;
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  const double h = (b - a) / n;
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += integrate(f, a + k * h, a + (k + 1) * h, tol / n);
  return total;
}

/// Limit of a sequence of partial sums of an alternating-ish tail by repeated
/// averaging (van Wijngaarden). `terms` are the signed panel contributions.
inline double alternating_limit(std::vector<double> partial) {
  if (partial.empty()) return 0.0;
  while (partial.size() > 1) {
    for (std::size_t i = 0; i + 1 < partial.size(); ++i)
      partial[i] = 0.5 * (partial[i] + partial[i + 1]);
    partial.pop_back();
  }
  return partial[0];
}

/// Simple least-squares line fit y = a + b x; returns (slope, stderr of slope).
inline std::pair<double, double> fit_slope(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_slope: need >= 2 points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - my - slope * (x[i] - mx);
    ss += r * r;
  }
  const double se = n > 2 ? std::sqrt(ss / ((n - 2) * sxx)) : 0.0;
  return {slope, se};
}

}  // namespace bandlab
