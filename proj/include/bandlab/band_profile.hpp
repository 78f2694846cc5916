#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bandlab {

enum class ProfileKind { RapidDecay, HeavyTail };

/// Shape of the variance band: a symmetric density f on R^d sampled on the
/// rescaled torus, either rapidly decaying (default standard Gaussian) or a
/// slowly decaying |x|^{-(1+beta)} tail with a smooth bump cutoff.
struct BandProfile {
  ProfileKind kind = ProfileKind::RapidDecay;
  int W = 1;
  /// exponent in the soft constraint L^delta <= W <= L (violations warn, not fail)
  double delta = 0.2;

  /// rapid-decay density; empty means the standard Gaussian in dimension d
  std::function<double(const std::vector<double>&)> f;

  // heavy-tail parameters (d = 1): f(x) = h0 x^2 (1+x^2)^{-(3+beta)/2},
  // which has tail h0 |x|^{-(1+beta)} (1 + O(x^-2)) and vanishes smoothly at 0
  double beta = 1.5;
  double h0 = 1.0;
  double cut_a = 0.25;
  double cut_b = 0.45;

  static BandProfile gaussian(int W) {
    BandProfile p;
    p.kind = ProfileKind::RapidDecay;
    p.W = W;
    p.validate();
    return p;
  }

  static BandProfile rapid_decay(int W, std::function<double(const std::vector<double>&)> density) {
    BandProfile p;
    p.kind = ProfileKind::RapidDecay;
    p.W = W;
    p.f = std::move(density);
    p.validate();
    return p;
  }

  /// All mass at the origin; the degenerate "W -> 0" limit with S = identity.
  static BandProfile delta_profile() {
    return rapid_decay(1, [](const std::vector<double>& x) {
      for (double c : x)
        if (c != 0.0) return 0.0;
      return 1.0;
    });
  }

  static BandProfile heavy_tail(int W, double beta, double h0 = 1.0, double a = 0.25,
                                double b = 0.45) {
    BandProfile p;
    p.kind = ProfileKind::HeavyTail;
    p.W = W;
    p.beta = beta;
    p.h0 = h0;
    p.cut_a = a;
    p.cut_b = b;
    p.validate();
    return p;
  }

  void validate() const {
    if (W < 1) throw std::invalid_argument("BandProfile: W must be a positive integer");
    if (kind == ProfileKind::HeavyTail) {
      if (!(beta > 0.0 && beta < 2.0))
        throw std::invalid_argument("BandProfile: heavy-tail exponent beta must lie in (0,2)");
      if (!(0.0 < cut_a && cut_a < cut_b && cut_b < 0.5))
        throw std::invalid_argument("BandProfile: cutoffs must satisfy 0 < a < b < 1/2");
      if (!(h0 > 0.0)) throw std::invalid_argument("BandProfile: h0 must be positive");
    }
  }

  /// f evaluated at a point of R^d (cutoff sigma not included).
  double density(const std::vector<double>& x) const {
    if (kind == ProfileKind::HeavyTail) {
      if (x.size() != 1)
        throw std::invalid_argument("BandProfile: heavy-tail profile is one-dimensional");
      const double u2 = x[0] * x[0];
      return h0 * u2 * std::pow(1.0 + u2, -(3.0 + beta) / 2.0);
    }
    if (f) return f(x);
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const int d = static_cast<int>(x.size());
    return std::exp(-0.5 * r2) * std::pow(2.0 * std::numbers::pi, -0.5 * d);
  }

  /// Smooth symmetric bump: 1 on |t| <= a, 0 on |t| >= b, cosine taper between.
  double bump(double t) const {
    const double at = std::abs(t);
    if (at <= cut_a) return 1.0;
    if (at >= cut_b) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (at - cut_a) / (cut_b - cut_a)));
  }
};

}  // namespace bandlab
