#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "bandlab/profile_engine.hpp"
#include "bandlab/resolvent.hpp"
#include "bandlab/sampling.hpp"

namespace bandlab {

/// Resolvent of H with row/column x replaced, as a rank-2 update of the base
/// resolvent (Woodbury): H' = H + U M U^*, U = [e_x, c], M = [[-c_x, 1],[1, 0]],
/// with c the conjugated entry change of row x. Entries of G' cost O(1) after
/// two matvecs.
class RowResampledResolvent {
 public:
  /// row_change[k] = h'_xk - h_xk (the new minus old row of H)
  RowResampledResolvent(const Eigen::MatrixXcd& G, int x, const Eigen::VectorXcd& row_change)
      : G_(G), x_(x) {
    Eigen::VectorXcd c = row_change.conjugate();
    c[x] = row_change[x].real();
    gu_.resize(G.rows(), 2);
    gu_.col(0) = G_.col(x);
    gu_.col(1) = G_ * c;
    vg_.resize(2, G.cols());
    vg_.row(0) = G_.row(x);
    vg_.row(1) = (G_.transpose() * c.conjugate()).transpose();
    Eigen::Matrix2cd cap;  // M^{-1} + U^* G U, with M^{-1} = [[0,1],[1,c_x]]
    cap(0, 0) = vg_(0, x);
    cap(0, 1) = 1.0 + (vg_.row(0) * c)(0, 0);
    cap(1, 0) = 1.0 + vg_(1, x);
    cap(1, 1) = c[x].real() + (vg_.row(1) * c)(0, 0);
    cap_inv_ = cap.inverse();
  }

  std::complex<double> operator()(Eigen::Index a, Eigen::Index b) const {
    const Eigen::RowVector2cd left(gu_(a, 0), gu_(a, 1));
    const Eigen::Vector2cd right(vg_(0, b), vg_(1, b));
    return G_(a, b) - (left * cap_inv_ * right)(0, 0);
  }

  int resampled_index() const { return x_; }

 private:
  const Eigen::MatrixXcd& G_;
  int x_;
  Eigen::MatrixXcd gu_;  // G U   (n x 2)
  Eigen::MatrixXcd vg_;  // U^* G (2 x n)
  Eigen::Matrix2cd cap_inv_;
};

struct ProbeEstimate {
  std::complex<double> estimate = 0.0;
  double std_error = 0.0;  // combined std error of both components
  int inner_trials = 0;
};

/// Monte Carlo estimate of the partial expectation P_x of an observable of G,
/// resampling the x-th row/column of H with fresh randomness per inner trial.
template <class Observable>
ProbeEstimate partial_expectation(const SampledBandMatrix& sample, const VarianceMatrix& S,
                                  const Eigen::MatrixXcd& G, int x, Observable&& obs,
                                  int inner_trials, std::uint64_t salt) {
  if (inner_trials < 16)
    throw std::invalid_argument("partial_expectation: need >= 16 inner trials");
  const auto& lat = S.lattice();
  const std::int64_t N = S.size();
  std::complex<double> sum = 0.0;
  double sumsq = 0.0;
  const std::uint64_t key = mix_seed(sample.seed, salt);
  Eigen::VectorXcd change(N);
  for (int it = 0; it < inner_trials; ++it) {
    const std::uint64_t trial_key = mix_seed(key, static_cast<std::uint64_t>(it));
    for (std::int64_t j = 0; j < N; ++j) {
      CounterRng rng(trial_key,
                     (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint64_t>(j));
      const double s = std::sqrt(S.row()[lat.diff_index(x, j)]);
      const std::complex<double> fresh =
          j == x ? std::complex<double>(detail::draw_real(rng, sample.distribution), 0.0)
                 : detail::draw_offdiag(rng, sample.symmetry, sample.distribution);
      change[j] = s * fresh - sample.H(x, j);
    }
    RowResampledResolvent gp(G, x, change);
    const std::complex<double> v = obs(gp);
    sum += v;
    sumsq += std::norm(v);
  }
  ProbeEstimate e;
  e.inner_trials = inner_trials;
  e.estimate = sum / static_cast<double>(inner_trials);
  const double var = std::max(0.0, sumsq / inner_trials - std::norm(e.estimate));
  e.std_error = std::sqrt(var / inner_trials);
  return e;
}

/// Spec'd probe: P_x |G_xy|^2 against delta_xy |m|^2 + |m|^2 Theta_xy.
struct PartialExpectationReport {
  ProbeEstimate probe;
  double predicted = 0.0;
  double deviation = 0.0;
};

inline PartialExpectationReport partial_expectation_probe(const SampledBandMatrix& sample,
                                                          const VarianceMatrix& S,
                                                          std::complex<double> z, int x, int y,
                                                          int inner_trials, std::uint64_t salt) {
  ResolventWorkspace ws(sample);
  const Eigen::MatrixXcd G = ws.resolvent(z);
  auto obs = [&](const RowResampledResolvent& gp) {
    return std::complex<double>(std::norm(gp(x, y)), 0.0);
  };
  PartialExpectationReport rep;
  rep.probe = partial_expectation(sample, S, G, x, obs, inner_trials, salt);
  const double am2 = std::norm(msc(z));
  const Eigen::VectorXd theta = theta_exact_dft(S, z).column;
  rep.predicted = (x == y ? am2 : 0.0) + am2 * theta[S.lattice().diff_index(x, y)];
  rep.deviation = std::abs(rep.probe.estimate.real() - rep.predicted);
  return rep;
}

/// The five averaged monomials of the fluctuation-averaging proposition.
/// G^* denotes the adjoint resolvent, so (G^*)_{a mu} = conj(G_{mu a}).
enum class FluctKind {
  NoQOffdiag,   // sum_a s_{rho a} G_{mu a} G_{a nu}            ~ Psi (Psi + M^-1/4)^2
  NoQPositive,  // sum_a s_{rho a} |G_{mu a}|^2                 ~ Psi^2  (no gain)
  WithQ,        // sum_a s_{rho a} Q_a(G_{mu a} G_{a mu})       ~ Psi^3
  WithQStar,    // sum_a s_{rho a} Q_a(|G_{mu a}|^2)            ~ Psi^2 (Psi + M^-1/4)^2
  TripleStar    // sum_{a!=b} s_{rho a} s_{ab} G_{ba} G_{a mu} (G^*)_{mu b}
};

struct FluctAvgReport {
  double magnitude = 0.0;
  double predicted_bound = 0.0;
  double ratio = 0.0;
};

inline FluctAvgReport fluct_avg_probe(const SampledBandMatrix& sample, const VarianceMatrix& S,
                                      std::complex<double> z, int rho, int mu, FluctKind kind,
                                      int inner_trials, std::uint64_t salt) {
  const std::int64_t N = S.size();
  const auto& lat = S.lattice();
  ResolventWorkspace ws(sample);
  const Eigen::MatrixXcd G = ws.resolvent(z);
  const double M = S.m_parameter();
  const double psi = 1.0 / std::sqrt(M * z.imag());
  const double mq = std::pow(M, -0.25);

  std::complex<double> acc = 0.0;
  const int nu = (mu + 1) % static_cast<int>(N);
  switch (kind) {
    case FluctKind::NoQOffdiag:
      for (std::int64_t a = 0; a < N; ++a) {
        if (a == mu || a == nu) continue;
        acc += S.row()[lat.diff_index(rho, a)] * G(mu, a) * G(a, nu);
      }
      break;
    case FluctKind::NoQPositive:
      for (std::int64_t a = 0; a < N; ++a) {
        if (a == mu) continue;
        acc += S.row()[lat.diff_index(rho, a)] * std::norm(G(mu, a));
      }
      break;
    case FluctKind::WithQ:
    case FluctKind::WithQStar:
      for (std::int64_t a = 0; a < N; ++a) {
        if (a == mu) continue;
        auto obs = [&](const RowResampledResolvent& gp) {
          return kind == FluctKind::WithQ
                     ? gp(mu, a) * gp(a, mu)
                     : std::complex<double>(std::norm(gp(mu, a)), 0.0);
        };
        const ProbeEstimate p =
            partial_expectation(sample, S, G, static_cast<int>(a), obs, inner_trials,
                                mix_seed(salt, static_cast<std::uint64_t>(a)));
        const std::complex<double> value =
            kind == FluctKind::WithQ ? G(mu, a) * G(a, mu)
                                     : std::complex<double>(std::norm(G(mu, a)), 0.0);
        acc += S.row()[lat.diff_index(rho, a)] * (value - p.estimate);
      }
      break;
    case FluctKind::TripleStar:
      for (std::int64_t a = 0; a < N; ++a) {
        if (a == mu) continue;
        const double sra = S.row()[lat.diff_index(rho, a)];
        for (std::int64_t b = 0; b < N; ++b) {
          if (b == a || b == mu) continue;
          acc += sra * S.row()[lat.diff_index(a, b)] * G(b, a) * G(a, mu) * std::conj(G(b, mu));
        }
      }
      break;
  }

  FluctAvgReport rep;
  rep.magnitude = std::abs(acc);
  switch (kind) {
    case FluctKind::NoQOffdiag:
      rep.predicted_bound = psi * (psi + mq) * (psi + mq);
      break;
    case FluctKind::NoQPositive:
      rep.predicted_bound = psi * psi;
      break;
    case FluctKind::WithQ:
      rep.predicted_bound = psi * psi * psi;
      break;
    case FluctKind::WithQStar:
    case FluctKind::TripleStar:
      rep.predicted_bound = psi * psi * (psi + mq) * (psi + mq);
      break;
  }
  rep.ratio = rep.magnitude / rep.predicted_bound;
  return rep;
}

}  // namespace bandlab
