#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bandlab/config.hpp"
#include "bandlab/harness.hpp"

namespace bandlab {

/// 17 significant digits: doubles round-trip exactly.
inline std::string fmt17(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

/// summary.csv: one row per trial x z-point.
inline void write_summary_csv(const RunRecord& rec, const std::filesystem::path& path) {
  std::ofstream f(path);
  f << "trial,E,eta,Lambda,Phi,max_T_minus_Theta,residual_ratio,deloc_fraction\n";
  for (const TrialZRow& r : rec.rows)
    f << r.trial << ',' << fmt17(r.E) << ',' << fmt17(r.eta) << ',' << fmt17(r.lambda) << ','
      << fmt17(r.phi) << ',' << fmt17(r.max_t_minus_theta) << ',' << fmt17(r.residual_ratio)
      << ',' << fmt17(r.deloc_fraction) << '\n';
}

/// profile_<tag>.csv: per-site profile columns for one z-point. x runs over
/// displacements along the first lattice axis.
inline void write_profile_csv(const RunRecord& rec, std::size_t zi,
                              const std::filesystem::path& path) {
  const ExperimentSpec& s = rec.spec;
  VarianceMatrix S = s.build_variance();
  const auto& lat = S.lattice();
  const std::int64_t N = s.N();
  const double E = rec.aggregates[zi].E, eta = rec.aggregates[zi].eta;
  const std::complex<double> z(E, eta);
  const Eigen::VectorXd theta = theta_exact_dft(S, z).column;
  // the diffusion constant of the band part (mean-field admixture excluded)
  const DiffusionConstant D =
      s.epsilon > 0.0
          ? diffusion_constant(VarianceMatrix(TorusLattice(s.d, s.L), s.band_profile()))
          : diffusion_constant(S);

  std::ofstream f(path);
  f << "x,Theta,theta_closed,Upsilon,T_trial_mean\n";
  const int L = lat.side();
  for (int x1 = 0; x1 < L; ++x1) {
    // displacement (x1, 0, ..., 0)
    std::vector<int> disp(s.d, 0);
    disp[0] = x1;
    const std::int64_t site = lat.index(disp);
    const int xr = lat.rep(x1);
    double closed = std::nan(""), ups = std::nan("");
    if (s.d == 1) {
      if (s.profile_kind == ProfileKind::HeavyTail) {
        if (s.beta > 1.0)
          closed = theta_heavy_tail(xr, z, s.W, s.beta, heavy_tail_b_constant(S));
      } else if (s.epsilon > 0.0) {
        closed = theta_mean_field(xr, z, s.W, static_cast<double>(N), D.scalar(), s.epsilon);
      } else if (!D.degenerate) {
        closed = ThetaClosed1d(z, s.W, static_cast<double>(N), D.scalar()).poisson(xr);
      }
      if (!D.degenerate && eta <= 1.0)
        ups = upsilon_1d(std::abs(xr), E, eta, s.W, static_cast<double>(N), D.scalar());
    } else {
      std::vector<double> xd(s.d, 0.0);
      xd[0] = xr;
      closed = theta_closed_dd(xd, z, s.W, L, D.D);
      if (eta <= 1.0) ups = upsilon_dd(xd, z, s.W, D.D);
    }
    const double tmean =
        zi < rec.t_mean_cols.size() && rec.t_mean_cols[zi].size() == N
            ? rec.t_mean_cols[zi][site]
            : std::nan("");
    f << x1 << ',' << fmt17(theta[site]) << ',' << fmt17(closed) << ',' << fmt17(ups) << ','
      << fmt17(tmean) << '\n';
  }
}

inline void write_manifest(const RunRecord& rec, const std::vector<std::string>& warnings,
                           const std::filesystem::path& path) {
  nlohmann::json m;
  m["version"] = rec.version;
  m["seed"] = rec.spec.master_seed;
  m["timing_sec"] = rec.seconds;
  m["config"] = serialize_config(rec.spec);
  m["warnings"] = warnings;
  nlohmann::json aggs = nlohmann::json::array();
  for (const ZAggregates& a : rec.aggregates) {
    nlohmann::json j;
    j["E"] = a.E;
    j["eta"] = a.eta;
    if (!std::isnan(a.lambda_over_phi_median)) {
      j["lambda_over_phi_median"] = a.lambda_over_phi_median;
      j["lambda_over_phi_p95"] = a.lambda_over_phi_p95;
    }
    if (!std::isnan(a.neta_tdiff_median)) {
      j["neta_tdiff_median"] = a.neta_tdiff_median;
      j["neta_tdiff_p95"] = a.neta_tdiff_p95;
    }
    if (!std::isnan(a.residual_ratio_median)) {
      j["residual_ratio_median"] = a.residual_ratio_median;
      j["residual_ratio_p95"] = a.residual_ratio_p95;
    }
    aggs.push_back(j);
  }
  m["aggregates"] = aggs;
  for (const auto& [k, v] : rec.scalars) m["scalars"][k] = v;
  std::ofstream f(path);
  f << m.dump(2) << '\n';
}

/// Writes the full bundle; returns the list of files written.
inline std::vector<std::string> write_result_bundle(const RunRecord& rec,
                                                    const std::vector<std::string>& warnings,
                                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  if (rec.spec.write_json) {
    write_manifest(rec, warnings, dir / "manifest.json");
    files.push_back("manifest.json");
  }
  if (rec.spec.write_csv) {
    write_summary_csv(rec, dir / "summary.csv");
    files.push_back("summary.csv");
    for (std::size_t zi = 0; zi < rec.aggregates.size(); ++zi) {
      const std::string tag = "E" + fmt_tag(rec.aggregates[zi].E) + "_eta" +
                              fmt_tag(rec.aggregates[zi].eta);
      write_profile_csv(rec, zi, dir / ("profile_" + tag + ".csv"));
      files.push_back("profile_" + tag + ".csv");
    }
  }
  return files;
}

/// cmd_profile output: deterministic comparison of the three exact routes,
/// the closed form and the envelope.
inline void write_profile_compare_csv(const ExperimentSpec& s,
                                      const std::filesystem::path& path) {
  VarianceMatrix S = s.build_variance();
  const std::int64_t N = s.N();
  const double E = s.E_list.front(), eta = s.eta_list.front();
  const std::complex<double> z(E, eta);
  const Eigen::VectorXd th_dft = theta_exact_dft(S, z).column;
  const Eigen::VectorXd th_dense = [&] {
    DiffusionProfile p = theta_exact_dense(S, z, 0);
    return p.column;
  }();
  const int n_max = static_cast<int>(std::ceil(40.0 / eta));
  const Eigen::VectorXd th_series = theta_series(S, z, n_max, 0).column;
  const DiffusionConstant D =
      s.epsilon > 0.0
          ? diffusion_constant(VarianceMatrix(TorusLattice(s.d, s.L), s.band_profile()))
          : diffusion_constant(S);
  const auto& lat = S.lattice();

  std::ofstream f(path);
  f << "x,Theta_dense,Theta_dft,Theta_series,theta_closed,Upsilon\n";
  const int L = lat.side();
  for (int x1 = 0; x1 < L; ++x1) {
    std::vector<int> disp(s.d, 0);
    disp[0] = x1;
    const std::int64_t site = lat.index(disp);
    const int xr = lat.rep(x1);
    double closed = std::nan(""), ups = std::nan("");
    if (s.d == 1) {
      if (s.profile_kind == ProfileKind::HeavyTail) {
        if (s.beta > 1.0)
          closed = theta_heavy_tail(xr, z, s.W, s.beta, heavy_tail_b_constant(S));
      } else if (s.epsilon > 0.0) {
        closed = theta_mean_field(xr, z, s.W, static_cast<double>(N), D.scalar(), s.epsilon);
      } else if (!D.degenerate) {
        closed = ThetaClosed1d(z, s.W, static_cast<double>(N), D.scalar()).poisson(xr);
      }
      if (!D.degenerate && eta <= 1.0)
        ups = upsilon_1d(std::abs(xr), E, eta, s.W, static_cast<double>(N), D.scalar());
    } else {
      std::vector<double> xd(s.d, 0.0);
      xd[0] = xr;
      closed = theta_closed_dd(xd, z, s.W, L, D.D);
      if (eta <= 1.0) ups = upsilon_dd(xd, z, s.W, D.D);
    }
    f << x1 << ',' << fmt17(th_dense[site]) << ',' << fmt17(th_dft[site]) << ','
      << fmt17(th_series[site]) << ',' << fmt17(closed) << ',' << fmt17(ups) << '\n';
  }
}

inline void write_fit_summary_csv(const SweepResult& sw, const std::string& axis_name,
                                  const std::filesystem::path& path) {
  std::ofstream f(path);
  f << "axis_value,statistic,value,fitted_slope,stderr\n";
  for (std::size_t i = 0; i < sw.values.size(); ++i) {
    for (const auto& [name, value] : sw.records[i].scalars) {
      std::string slope, se;
      for (const FitRow& fit : sw.fits)
        if (fit.statistic == name) {
          slope = fmt17(fit.slope);
          se = fmt17(fit.stderr_slope);
        }
      f << fmt17(sw.values[i]) << ',' << name << ',' << fmt17(value) << ',' << slope << ',' << se
        << '\n';
    }
  }
  (void)axis_name;
}

}  // namespace bandlab
