#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bandlab {

/// d-dimensional discrete torus [-L/2, L/2)^d with N = L^d sites in
/// row-major canonical order (first coordinate slowest).
class TorusLattice {
 public:
  TorusLattice(int dimension, int side) : d_(dimension), L_(side) {
    if (dimension < 1) throw std::invalid_argument("TorusLattice: dimension must be >= 1");
    if (side < 2) throw std::invalid_argument("TorusLattice: side must be >= 2");
    n_ = 1;
    for (int k = 0; k < d_; ++k) {
      if (n_ > std::numeric_limits<std::int64_t>::max() / L_)
        throw std::invalid_argument("TorusLattice: L^d overflows");
      n_ *= L_;
    }
  }

  int dimension() const { return d_; }
  int side() const { return L_; }
  std::int64_t site_count() const { return n_; }

  /// Canonical representative of one coordinate, in [-L/2, L/2).
  int rep(std::int64_t c) const {
    std::int64_t r = c % L_;
    if (r < 0) r += L_;
    return static_cast<int>(r >= L_ - L_ / 2 ? r - L_ : r);
  }

  /// Coordinates of a site in [0, L)^d, row-major.
  std::vector<int> coords(std::int64_t site) const {
    std::vector<int> c(d_);
    for (int k = d_ - 1; k >= 0; --k) {
      c[k] = static_cast<int>(site % L_);
      site /= L_;
    }
    return c;
  }

  /// Site index of coordinates (taken mod L).
  std::int64_t index(const std::vector<int>& c) const {
    std::int64_t s = 0;
    for (int k = 0; k < d_; ++k) {
      std::int64_t r = c[k] % L_;
      if (r < 0) r += L_;
      s = s * L_ + r;
    }
    return s;
  }

  /// Canonical representative of a site as a lattice vector.
  std::vector<int> site_rep(std::int64_t site) const {
    std::vector<int> c = coords(site);
    for (int k = 0; k < d_; ++k) c[k] = rep(c[k]);
    return c;
  }

  /// Site index of the coordinate-wise difference x - y (mod L); the
  /// circulant displacement used to address generating rows.
  std::int64_t diff_index(std::int64_t x, std::int64_t y) const {
    std::int64_t s = 0;
    // peel coordinates from the fastest axis, rebuild row-major
    std::int64_t mult = 1;
    for (int k = 0; k < d_; ++k) {
      std::int64_t cx = x % L_, cy = y % L_;
      x /= L_;
      y /= L_;
      std::int64_t r = (cx - cy) % L_;
      if (r < 0) r += L_;
      s += r * mult;
      mult *= L_;
    }
    return s;
  }

  /// Periodic Euclidean distance |x - y|_L between two sites.
  double periodic_distance(std::int64_t x, std::int64_t y) const {
    double s2 = 0.0;
    for (int k = 0; k < d_; ++k) {
      int r = rep(static_cast<std::int64_t>(x % L_) - static_cast<std::int64_t>(y % L_));
      x /= L_;
      y /= L_;
      s2 += static_cast<double>(r) * r;
    }
    return std::sqrt(s2);
  }

  /// |[site]_L|, distance of a site's representative from the origin.
  double rep_norm(std::int64_t site) const { return periodic_distance(site, 0); }

 private:
  int d_;
  int L_;
  std::int64_t n_;
};

inline TorusLattice build_lattice(int d, int L) { return TorusLattice(d, L); }

}  // namespace bandlab
