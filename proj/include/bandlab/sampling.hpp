#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "bandlab/rng.hpp"
#include "bandlab/variance_matrix.hpp"

namespace bandlab {

enum class SymmetryClass { RealSymmetric, ComplexHermitian };
enum class EntryDistribution { Gaussian, BernoulliPm1, UniformUnitVar };

/// One Hermitian draw H with E h_ij = 0 and E|h_ij|^2 = s_ij. Entries are a
/// pure function of (S, class, distribution, seed): entry (i,j) is generated
/// from the Philox block addressed by that index pair.
struct SampledBandMatrix {
  Eigen::MatrixXcd H;
  SymmetryClass symmetry = SymmetryClass::ComplexHermitian;
  EntryDistribution distribution = EntryDistribution::Gaussian;
  std::uint64_t seed = 0;
  double mean_field_eps = 0.0;
  std::uint64_t u_seed = 0;

  std::int64_t size() const { return H.rows(); }
  bool is_real() const { return symmetry == SymmetryClass::RealSymmetric; }
};

namespace detail {

/// unit-variance real draw of the requested distribution
inline double draw_real(CounterRng& rng, EntryDistribution dist) {
  switch (dist) {
    case EntryDistribution::Gaussian:
      return rng.next_gauss();
    case EntryDistribution::BernoulliPm1:
      return rng.next_sign();
    case EntryDistribution::UniformUnitVar:
      return rng.next_uniform_unit_var();
  }
  return 0.0;
}

/// zeta_ij for i < j: real class draws one real unit-variance value; complex
/// class draws independent real and imaginary parts with variance 1/2 each,
/// so E zeta^2 = 0 exactly in distribution.
inline std::complex<double> draw_offdiag(CounterRng& rng, SymmetryClass sym,
                                         EntryDistribution dist) {
  if (sym == SymmetryClass::RealSymmetric) return {draw_real(rng, dist), 0.0};
  const double re = draw_real(rng, dist);
  const double im = draw_real(rng, dist);
  return std::complex<double>(re, im) / std::sqrt(2.0);
}

}  // namespace detail

inline SampledBandMatrix sample_matrix(const VarianceMatrix& S, SymmetryClass sym,
                                       EntryDistribution dist, std::uint64_t seed) {
  const std::int64_t N = S.size();
  SampledBandMatrix out;
  out.symmetry = sym;
  out.distribution = dist;
  out.seed = seed;
  out.mean_field_eps = S.epsilon();
  out.H.resize(N, N);
  const auto& lat = S.lattice();
  for (std::int64_t i = 0; i < N; ++i) {
    {
      CounterRng rng(seed, (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(i));
      const double sii = std::sqrt(S.row()[0]);
      out.H(i, i) = sii * detail::draw_real(rng, dist);  // zeta_ii real
    }
    for (std::int64_t j = i + 1; j < N; ++j) {
      CounterRng rng(seed, (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j));
      const double sij = std::sqrt(S.row()[lat.diff_index(i, j)]);
      const std::complex<double> z = detail::draw_offdiag(rng, sym, dist);
      out.H(i, j) = sij * z;
      out.H(j, i) = sij * std::conj(z);
    }
  }
  return out;
}

/// Resamples row/column x of H in place with fresh randomness (counter salted
/// by `salt`), preserving Hermiticity. Returns the new row as a vector.
inline Eigen::VectorXcd resample_row(SampledBandMatrix& Hmat, const VarianceMatrix& S,
                                     std::int64_t x, std::uint64_t salt) {
  const std::int64_t N = S.size();
  const auto& lat = S.lattice();
  Eigen::VectorXcd newrow(N);
  const std::uint64_t key = mix_seed(Hmat.seed, salt);
  for (std::int64_t j = 0; j < N; ++j) {
    CounterRng rng(key, (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(j));
    const double s = std::sqrt(S.row()[lat.diff_index(x, j)]);
    if (j == x)
      newrow[j] = s * detail::draw_real(rng, Hmat.distribution);
    else
      newrow[j] = s * detail::draw_offdiag(rng, Hmat.symmetry, Hmat.distribution);
  }
  Hmat.H.row(x) = newrow.transpose();
  Hmat.H.col(x) = newrow.conjugate();
  Hmat.H(x, x) = newrow[x].real();
  return newrow;
}

/// H_eps = sqrt(1-eps) H + sqrt(eps) U with U an independent Wigner draw of
/// the same symmetry class, E|u_ij|^2 = 1/N (Gaussian entries).
inline SampledBandMatrix sample_mean_field_mix(const SampledBandMatrix& H, double eps,
                                               std::uint64_t u_seed) {
  if (!(eps >= 0.0 && eps <= 0.5))
    throw std::invalid_argument("sample_mean_field_mix: epsilon must lie in [0, 1/2]");
  SampledBandMatrix out = H;
  if (eps == 0.0) return out;
  const std::int64_t N = H.H.rows();
  const double su = std::sqrt(1.0 / static_cast<double>(N));
  const double ch = std::sqrt(1.0 - eps), ce = std::sqrt(eps);
  out.mean_field_eps = 1.0 - (1.0 - eps) * (1.0 - H.mean_field_eps);
  out.u_seed = u_seed;
  for (std::int64_t i = 0; i < N; ++i) {
    {
      CounterRng rng(u_seed, (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(i));
      out.H(i, i) = ch * H.H(i, i) + ce * su * rng.next_gauss();
    }
    for (std::int64_t j = i + 1; j < N; ++j) {
      CounterRng rng(u_seed, (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j));
      const std::complex<double> u = detail::draw_offdiag(rng, H.symmetry,
                                                          EntryDistribution::Gaussian);
      out.H(i, j) = ch * H.H(i, j) + ce * su * u;
      out.H(j, i) = std::conj(out.H(i, j));
    }
  }
  return out;
}

}  // namespace bandlab
