#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bandlab/deloc.hpp"
#include "bandlab/profile_engine.hpp"
#include "bandlab/resolvent.hpp"
#include "bandlab/sampling.hpp"
#include "bandlab/semicircle.hpp"
#include "bandlab/version.hpp"

namespace bandlab {

struct ExperimentSpec {
  // ensemble
  int d = 1;
  int L = 64;
  int W = 8;
  ProfileKind profile_kind = ProfileKind::RapidDecay;
  double beta = 1.5, h0 = 1.0, cut_a = 0.25, cut_b = 0.45;
  double delta = 0.2;
  SymmetryClass symmetry = SymmetryClass::ComplexHermitian;
  EntryDistribution distribution = EntryDistribution::Gaussian;
  double epsilon = 0.0;
  // spectral
  double kappa = 0.1, gamma = 0.1;
  std::vector<double> E_list{0.0};
  std::vector<double> eta_list{0.5};
  // run
  int trials = 1;
  std::uint64_t master_seed = 1;
  bool obs_lambda = true, obs_t_profile = false, obs_residual = false, obs_deloc = false;
  std::int64_t deloc_ell = 0;  // 0 means N/8
  double deloc_eps = 0.1;
  double memory_budget_mb = 4096.0;
  // output
  std::string out_dir = "out";
  bool write_csv = true, write_json = true;

  std::int64_t N() const {
    std::int64_t n = 1;
    for (int k = 0; k < d; ++k) n *= L;
    return n;
  }

  BandProfile band_profile() const {
    BandProfile p = profile_kind == ProfileKind::HeavyTail
                        ? BandProfile::heavy_tail(W, beta, h0, cut_a, cut_b)
                        : BandProfile::gaussian(W);
    p.delta = delta;
    return p;
  }

  /// Variance profile including the mean-field admixture.
  VarianceMatrix build_variance() const {
    VarianceMatrix S(TorusLattice(d, L), band_profile());
    return epsilon > 0.0 ? mix_mean_field(S, epsilon) : S;
  }

  /// per-trial sampling seed, a pure function of (master_seed, trial)
  std::uint64_t trial_seed(int trial) const {
    return mix_seed(master_seed, static_cast<std::uint64_t>(trial));
  }
  std::uint64_t trial_u_seed(int trial) const {
    return mix_seed(master_seed, 0x8000000000000000ull | static_cast<std::uint64_t>(trial));
  }

  /// rough per-trial working set (dense complex N x N objects)
  double estimated_trial_mb() const {
    const double n2 = static_cast<double>(N()) * static_cast<double>(N());
    double words = 16 + 16 + 16;  // H, eigenvectors, G
    if (obs_t_profile || obs_residual) words += 16;  // |G|^2 and T
    return n2 * words / 1.0e6;
  }
};

struct TrialZRow {
  int trial = 0;
  double E = 0.0, eta = 0.0;
  double lambda = std::nan("");
  double phi = std::nan("");
  double max_t_minus_theta = std::nan("");
  double residual_ratio = std::nan("");
  double deloc_fraction = std::nan("");
};

struct ZAggregates {
  double E = 0.0, eta = 0.0;
  double lambda_over_phi_median = std::nan(""), lambda_over_phi_p95 = std::nan("");
  double neta_tdiff_median = std::nan(""), neta_tdiff_p95 = std::nan("");
  double residual_ratio_median = std::nan(""), residual_ratio_p95 = std::nan("");
};

struct RunRecord {
  ExperimentSpec spec;
  std::string version = bandlab::version;
  std::vector<TrialZRow> rows;              // ordered by (trial, z index)
  std::vector<ZAggregates> aggregates;      // one per z-grid point
  std::vector<Eigen::VectorXd> t_mean_cols; // per z: trial-mean of T_{x,0}
  std::map<std::string, double> scalars;    // named deterministic statistics
  double seconds = 0.0;
};

/// Exact order statistic: q-quantile as the ceil(q n)-th smallest value.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t k =
      std::min(v.size() - 1, static_cast<std::size_t>(std::ceil(q * v.size())) -
                                 (q > 0.0 ? 1 : 0));
  return v[k];
}

inline void validate_z_grid(const ExperimentSpec& spec, const VarianceMatrix& S) {
  const double M = S.m_parameter();
  const double eta_floor = std::pow(M, spec.gamma - 1.0);
  for (double E : spec.E_list)
    if (!(E >= -2.0 + spec.kappa && E <= 2.0 - spec.kappa))
      throw std::invalid_argument("z-grid: E=" + std::to_string(E) +
                                  " outside the spectral domain [-2+kappa, 2-kappa]");
  for (double eta : spec.eta_list) {
    if (!(eta >= eta_floor))
      throw std::invalid_argument("z-grid: eta=" + std::to_string(eta) +
                                  " below the spectral-domain floor M^{gamma-1}=" +
                                  std::to_string(eta_floor));
    if (!(eta <= 10.0))
      throw std::invalid_argument("z-grid: eta=" + std::to_string(eta) +
                                  " above the spectral-domain ceiling 10");
  }
}

inline RunRecord run_experiment(const ExperimentSpec& spec, int threads = 1) {
  const auto t_start = std::chrono::steady_clock::now();
  if (spec.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  VarianceMatrix S = spec.build_variance();
  validate_z_grid(spec, S);
  if (spec.estimated_trial_mb() > spec.memory_budget_mb)
    throw std::invalid_argument("memory budget exceeded: one trial needs about " +
                                std::to_string(spec.estimated_trial_mb()) + " MB, budget is " +
                                std::to_string(spec.memory_budget_mb) + " MB");

  const std::int64_t N = spec.N();
  std::vector<std::pair<double, double>> zgrid;
  for (double E : spec.E_list)
    for (double eta : spec.eta_list) zgrid.emplace_back(E, eta);

  // Theta is trial independent: one circulant-DFT column per z
  std::vector<Eigen::VectorXd> theta_cols;
  if (spec.obs_t_profile)
    for (auto [E, eta] : zgrid)
      theta_cols.push_back(theta_exact_dft(S, {E, eta}).column);

  const std::int64_t ell = spec.deloc_ell > 0 ? spec.deloc_ell : N / 8;

  RunRecord rec;
  rec.spec = spec;
  rec.rows.resize(static_cast<std::size_t>(spec.trials) * zgrid.size());
  std::vector<std::vector<Eigen::VectorXd>> t_cols(
      spec.obs_t_profile ? zgrid.size() : 0,
      std::vector<Eigen::VectorXd>(spec.obs_t_profile ? spec.trials : 0));

  int workers = std::max(1, std::min(threads, spec.trials));
  const double mem_cap = std::max(
      1.0, std::floor(spec.memory_budget_mb / std::max(1.0, spec.estimated_trial_mb())));
  workers = std::min<long>(workers, static_cast<long>(mem_cap));

  // epsilon > 0 samples the band part from the unmixed profile, then mixes
  std::optional<VarianceMatrix> S0;
  if (spec.epsilon > 0.0) S0.emplace(TorusLattice(spec.d, spec.L), spec.band_profile());

  std::atomic<int> next_trial{0};
  auto worker = [&]() {
    for (;;) {
      const int t = next_trial.fetch_add(1);
      if (t >= spec.trials) return;
      SampledBandMatrix H =
          spec.epsilon > 0.0
              ? sample_mean_field_mix(
                    sample_matrix(*S0, spec.symmetry, spec.distribution, spec.trial_seed(t)),
                    spec.epsilon, spec.trial_u_seed(t))
              : sample_matrix(S, spec.symmetry, spec.distribution, spec.trial_seed(t));
      ResolventWorkspace ws(H);
      double deloc_fraction = std::nan("");
      if (spec.obs_deloc && spec.d == 1)
        deloc_fraction = eigen_deloc(ws, spec.kappa, spec.deloc_eps, ell).fraction;
      for (std::size_t zi = 0; zi < zgrid.size(); ++zi) {
        const auto [E, eta] = zgrid[zi];
        const std::complex<double> z(E, eta);
        const std::complex<double> m = msc(z);
        TrialZRow row;
        row.trial = t;
        row.E = E;
        row.eta = eta;
        row.deloc_fraction = deloc_fraction;
        const Eigen::MatrixXcd G = ws.resolvent(z);
        if (spec.d == 1)
          row.phi = std::sqrt(control_phi_eps2(static_cast<double>(N),
                                               static_cast<double>(spec.W), eta, spec.epsilon));
        else
          row.phi = std::sqrt(std::max(1.0 / S.m_parameter(), 1.0 / (N * eta)));
        if (spec.obs_lambda) row.lambda = lambda_stat(G, m);
        if (spec.obs_t_profile || spec.obs_residual) {
          const Eigen::MatrixXd T = t_matrix(S, G);
          if (spec.obs_t_profile) {
            const Eigen::VectorXd& th = theta_cols[zi];
            double mx = 0.0;
            const auto& lat = S.lattice();
            for (std::int64_t y = 0; y < N; ++y)
              for (std::int64_t x = 0; x < N; ++x)
                mx = std::max(mx, std::abs(T(x, y) - th[lat.diff_index(x, y)]));
            row.max_t_minus_theta = mx;
            t_cols[zi][t] = T.col(0);
          }
          if (spec.obs_residual) row.residual_ratio = sc_residual(T, S, m, eta).normalized_ratio;
        }
        rec.rows[static_cast<std::size_t>(t) * zgrid.size() + zi] = row;
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // ordered aggregation, one pass per z-grid point
  for (std::size_t zi = 0; zi < zgrid.size(); ++zi) {
    ZAggregates agg;
    agg.E = zgrid[zi].first;
    agg.eta = zgrid[zi].second;
    std::vector<double> lam_phi, tdiff, resid;
    for (int t = 0; t < spec.trials; ++t) {
      const TrialZRow& row = rec.rows[static_cast<std::size_t>(t) * zgrid.size() + zi];
      if (!std::isnan(row.lambda)) lam_phi.push_back(row.lambda / row.phi);
      if (!std::isnan(row.max_t_minus_theta))
        tdiff.push_back(N * agg.eta * row.max_t_minus_theta);
      if (!std::isnan(row.residual_ratio)) resid.push_back(row.residual_ratio);
    }
    if (!lam_phi.empty()) {
      agg.lambda_over_phi_median = quantile(lam_phi, 0.5);
      agg.lambda_over_phi_p95 = quantile(lam_phi, 0.95);
    }
    if (!tdiff.empty()) {
      agg.neta_tdiff_median = quantile(tdiff, 0.5);
      agg.neta_tdiff_p95 = quantile(tdiff, 0.95);
    }
    if (!resid.empty()) {
      agg.residual_ratio_median = quantile(resid, 0.5);
      agg.residual_ratio_p95 = quantile(resid, 0.95);
    }
    rec.aggregates.push_back(agg);
    if (spec.obs_t_profile) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(N);
      for (int t = 0; t < spec.trials; ++t) mean += t_cols[zi][t];
      rec.t_mean_cols.push_back(mean / spec.trials);
    }
  }

  // deterministic scalar statistics for sweeps
  rec.scalars["spectral_gap"] = spectral_gap(S).gap;
  rec.scalars["gap_normalized"] = spectral_gap(S).normalized_ratio;
  {
    const auto [E, eta] = zgrid.front();
    const Eigen::VectorXd th = theta_exact_dft(S, {E, eta}).column;
    rec.scalars["max_theta"] = th.maxCoeff();
    if (spec.d == 1 && spec.profile_kind == ProfileKind::RapidDecay && spec.epsilon == 0.0) {
      const double D = diffusion_constant(S).scalar();
      ThetaClosed1d closed({E, eta}, spec.W, static_cast<double>(N), D);
      double sup = 0.0;
      const auto& lat = S.lattice();
      for (std::int64_t x = 0; x < N; ++x)
        sup = std::max(sup, std::abs(th[x] - closed.poisson(lat.site_rep(x)[0])));
      rec.scalars["sup_theta_minus_theta_closed"] = sup;
    }
  }
  if (!rec.aggregates.empty() && !std::isnan(rec.aggregates[0].lambda_over_phi_p95))
    rec.scalars["lambda_over_phi_p95"] = rec.aggregates[0].lambda_over_phi_p95;
  if (!rec.aggregates.empty() && !std::isnan(rec.aggregates[0].neta_tdiff_p95))
    rec.scalars["neta_tdiff_p95"] = rec.aggregates[0].neta_tdiff_p95;

  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rec;
}

enum class SweepAxis { N, W, Eta, Epsilon, Beta };

struct FitRow {
  std::string statistic;
  double slope = std::nan("");
  double stderr_slope = std::nan("");
};

struct SweepResult {
  std::vector<double> values;
  std::vector<RunRecord> records;
  std::vector<FitRow> fits;  // log-log least squares per statistic
};

inline ExperimentSpec instantiate_axis(ExperimentSpec spec, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::N:
      if (spec.d != 1) throw std::invalid_argument("sweep axis N requires d = 1");
      spec.L = static_cast<int>(value);
      break;
    case SweepAxis::W:
      spec.W = static_cast<int>(value);
      break;
    case SweepAxis::Eta:
      spec.eta_list = {value};
      break;
    case SweepAxis::Epsilon:
      spec.epsilon = value;
      break;
    case SweepAxis::Beta:
      spec.beta = value;
      break;
  }
  if (spec.W > spec.L)
    throw std::invalid_argument("sweep: axis value makes W exceed L");
  return spec;
}

inline SweepResult sweep(const ExperimentSpec& spec_template, SweepAxis axis,
                         const std::vector<double>& values, int threads = 1) {
  if (values.empty()) throw std::invalid_argument("sweep: empty value list");
  SweepResult out;
  out.values = values;
  for (double v : values) out.records.push_back(run_experiment(instantiate_axis(spec_template, axis, v), threads));
  if (values.size() >= 2) {
    for (const auto& [name, first_val] : out.records.front().scalars) {
      std::vector<double> lx, ly;
      bool ok = first_val > 0.0;
      for (std::size_t i = 0; ok && i < values.size(); ++i) {
        auto it = out.records[i].scalars.find(name);
        if (it == out.records[i].scalars.end() || !(it->second > 0.0)) ok = false;
        else {
          lx.push_back(std::log(values[i]));
          ly.push_back(std::log(it->second));
        }
      }
      if (!ok) continue;
      const auto [slope, se] = fit_slope(lx, ly);
      out.fits.push_back({name, slope, se});
    }
  }
  return out;
}

}  // namespace bandlab
