#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandlab/band_profile.hpp"
#include "bandlab/fft.hpp"
#include "bandlab/lattice.hpp"

namespace bandlab {

/// The circulant stochastic variance profile S, stored as its generating row
/// s_{.0}. Rows sum to 1 exactly by construction (normalization by the lattice
/// sum of f), s_xy = s_{[x-y]_L,0}, and the spectrum is the DFT of the row.
class VarianceMatrix {
 public:
  VarianceMatrix(TorusLattice lattice, BandProfile profile)
      : lat_(std::move(lattice)), prof_(std::move(profile)) {
    prof_.validate();
    const std::int64_t N = lat_.site_count();
    const int d = lat_.dimension();
    if (prof_.kind == ProfileKind::HeavyTail && d != 1)
      throw std::invalid_argument("VarianceMatrix: heavy-tail profile requires d = 1");

    row_.resize(N);
    std::vector<double> u(d);
    for (std::int64_t x = 0; x < N; ++x) {
      const std::vector<int> r = lat_.site_rep(x);
      for (int k = 0; k < d; ++k) u[k] = static_cast<double>(r[k]) / prof_.W;
      double val = prof_.density(u);
      if (prof_.kind == ProfileKind::HeavyTail)
        val *= prof_.bump(static_cast<double>(r[0]) / static_cast<double>(N));
      if (val < 0.0) throw std::invalid_argument("VarianceMatrix: profile density is negative");
      row_[x] = val;
    }
    z_ = row_.sum();
    if (!(z_ > 0.0))
      throw std::invalid_argument("VarianceMatrix: profile vanishes on every lattice point");
    row_ /= z_;
    m_ = 1.0 / row_.maxCoeff();

    // soft range check L^delta <= W <= L (Eq.-level constraint; degenerate
    // cases like S = I stay constructible)
    const double lo = std::pow(static_cast<double>(lat_.side()), prof_.delta);
    if (prof_.W < lo || prof_.W > lat_.side())
      warning_ = "bandwidth W=" + std::to_string(prof_.W) + " outside [L^delta, L] = [" +
                 std::to_string(lo) + ", " + std::to_string(lat_.side()) + "]";
  }

  const TorusLattice& lattice() const { return lat_; }
  const BandProfile& profile() const { return prof_; }
  std::int64_t size() const { return lat_.site_count(); }

  /// generating row s_{.0}
  const Eigen::ArrayXd& row() const { return row_; }
  /// normalization Z = sum of f over the torus
  double normalization() const { return z_; }
  /// M = 1 / max_{ij} s_ij
  double m_parameter() const { return m_; }
  /// mean-field weight epsilon already mixed into this profile
  double epsilon() const { return eps_; }
  const std::string& warning() const { return warning_; }

  double operator()(std::int64_t x, std::int64_t y) const { return row_[lat_.diff_index(x, y)]; }

  Eigen::MatrixXd dense() const {
    const std::int64_t N = size();
    Eigen::MatrixXd S(N, N);
    for (std::int64_t x = 0; x < N; ++x)
      for (std::int64_t y = 0; y < N; ++y) S(x, y) = row_[lat_.diff_index(x, y)];
    return S;
  }

  /// DFT of the generating row; real for the symmetric profiles used here.
  /// The imaginary residue is checked against tol before being discarded.
  const Eigen::ArrayXd& spectrum(double tol = 1e-10) const {
    if (spectrum_.size() == 0) {
      Eigen::VectorXcd hat = torus_dft(row_, lat_);
      const double imag_residue = hat.imag().cwiseAbs().maxCoeff();
      if (imag_residue > tol)
        throw std::runtime_error("VarianceMatrix: spectrum has imaginary residue " +
                                 std::to_string(imag_residue));
      spectrum_ = hat.real().array();
    }
    return spectrum_;
  }

  /// S * v through the circulant diagonalization.
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    return circulant_apply(spectrum(), lat_, v);
  }

  /// S * X, column by column.
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd Y = X;
    circulant_apply_columns(spectrum(), lat_, Y);
    return Y;
  }

  /// X * S  (= (S X^T)^T since S is symmetric).
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd Y = X.transpose();
    circulant_apply_columns(spectrum(), lat_, Y);
    return Y.transpose();
  }

  /// S_eps = (1-eps) S + eps ee*; still circulant, stochastic and symmetric.
  friend VarianceMatrix mix_mean_field(const VarianceMatrix& S, double eps) {
    if (!(eps >= 0.0 && eps <= 0.5))
      throw std::invalid_argument("mix_mean_field: epsilon must lie in [0, 1/2]");
    VarianceMatrix out = S;
    if (eps == 0.0) return out;
    const double N = static_cast<double>(S.size());
    out.row_ = (1.0 - eps) * S.row_ + eps / N;
    out.m_ = 1.0 / out.row_.maxCoeff();
    out.eps_ = 1.0 - (1.0 - eps) * (1.0 - S.eps_);
    out.spectrum_.resize(0);
    return out;
  }

 private:
  TorusLattice lat_;
  BandProfile prof_;
  Eigen::ArrayXd row_;
  double z_ = 0.0;
  double m_ = 0.0;
  double eps_ = 0.0;
  std::string warning_;
  mutable Eigen::ArrayXd spectrum_;
};

inline VarianceMatrix build_variance_matrix(const TorusLattice& lat, const BandProfile& prof) {
  return VarianceMatrix(lat, prof);
}

}  // namespace bandlab
