#pragma once

#include <Eigen/Dense>
#include <complex>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "bandlab/lattice.hpp"

namespace bandlab {

namespace detail {
inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft;  // caches plans per transform size
  return fft;
}

/// In-place DFT (sign = +1) or inverse DFT (sign = -1, normalized by 1/N
/// overall) of a complex torus array, transformed along every axis.
inline void torus_transform(std::vector<std::complex<double>>& buf, const TorusLattice& lat,
                            int sign) {
  const int d = lat.dimension();
  const std::int64_t N = lat.site_count();
  const int L = lat.side();
  auto& fft = fft_engine();
  std::vector<std::complex<double>> line(L), out(L);
  std::int64_t stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    const std::int64_t blocks = N / L;
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::int64_t lo = b % stride;
      const std::int64_t hi = b / stride;
      const std::int64_t base = hi * stride * L + lo;
      for (int k = 0; k < L; ++k) line[k] = buf[base + k * stride];
      if (sign > 0)
        fft.fwd(out, line);
      else
        fft.inv(out, line);
      for (int k = 0; k < L; ++k) buf[base + k * stride] = out[k];
    }
    stride *= L;
  }
}
}  // namespace detail

/// DFT of a real array laid out over the torus (row-major, L^d entries).
inline Eigen::VectorXcd torus_dft(const Eigen::ArrayXd& data, const TorusLattice& lat) {
  const std::int64_t N = lat.site_count();
  std::vector<std::complex<double>> buf(N);
  for (std::int64_t i = 0; i < N; ++i) buf[i] = data[i];
  detail::torus_transform(buf, lat, +1);
  return Eigen::Map<Eigen::VectorXcd>(buf.data(), N);
}

/// Inverse DFT (with the 1/N normalization) of a complex torus array.
inline Eigen::VectorXcd torus_idft(const Eigen::VectorXcd& data, const TorusLattice& lat) {
  const std::int64_t N = lat.site_count();
  std::vector<std::complex<double>> buf(data.data(), data.data() + N);
  detail::torus_transform(buf, lat, -1);
  return Eigen::Map<Eigen::VectorXcd>(buf.data(), N);
}

/// Applies the circulant with the given (real) Fourier multiplier to each
/// column of X in place. multiplier is the DFT of the generating row.
inline void circulant_apply_columns(const Eigen::ArrayXd& multiplier, const TorusLattice& lat,
                                    Eigen::MatrixXd& X) {
  const std::int64_t N = lat.site_count();
  std::vector<std::complex<double>> buf(N);
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    for (std::int64_t i = 0; i < N; ++i) buf[i] = X(i, j);
    detail::torus_transform(buf, lat, +1);
    for (std::int64_t i = 0; i < N; ++i) buf[i] *= multiplier[i];
    detail::torus_transform(buf, lat, -1);
    for (std::int64_t i = 0; i < N; ++i) X(i, j) = buf[i].real();
  }
}

/// Circulant times vector.
inline Eigen::VectorXd circulant_apply(const Eigen::ArrayXd& multiplier, const TorusLattice& lat,
                                       const Eigen::VectorXd& v) {
  Eigen::MatrixXd X = v;
  circulant_apply_columns(multiplier, lat, X);
  return X.col(0);
}

}  // namespace bandlab
