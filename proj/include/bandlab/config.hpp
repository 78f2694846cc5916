#pragma once

#include <json.hpp>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandlab/harness.hpp"

namespace bandlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + where + "." + it.key() + "'");
}

template <class T>
T get_or(const nlohmann::json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type");
  }
}
}  // namespace detail

struct ParsedConfig {
  ExperimentSpec spec;
  std::vector<std::string> warnings;
};

/// Parses and validates the experiment configuration document. Unknown keys
/// are rejected; physical constraints are checked with explicit messages.
inline ParsedConfig parse_config(const nlohmann::json& doc) {
  using nlohmann::json;
  ParsedConfig out;
  ExperimentSpec& s = out.spec;

  detail::reject_unknown(doc, {"ensemble", "spectral", "run", "output"}, "");
  if (!doc.contains("ensemble")) throw ConfigError("missing section 'ensemble'");
  const json& ens = doc.at("ensemble");
  detail::reject_unknown(
      ens, {"d", "L", "W", "profile", "class", "distribution", "epsilon", "delta"}, "ensemble");
  s.d = detail::get_or(ens, "d", 1);
  if (s.d < 1) throw ConfigError("ensemble.d must be >= 1");
  if (!ens.contains("L") || !ens.contains("W"))
    throw ConfigError("ensemble.L and ensemble.W are required");
  s.L = ens.at("L").get<int>();
  s.W = ens.at("W").get<int>();
  if (s.L < 2) throw ConfigError("ensemble.L must be >= 2");
  if (s.W < 1) throw ConfigError("ensemble.W must be >= 1");
  s.delta = detail::get_or(ens, "delta", 0.2);

  if (ens.contains("profile")) {
    const json& prof = ens.at("profile");
    detail::reject_unknown(prof, {"kind", "beta", "h0", "a", "b"}, "ensemble.profile");
    const std::string kind = detail::get_or<std::string>(prof, "kind", "gaussian");
    if (kind == "gaussian") {
      s.profile_kind = ProfileKind::RapidDecay;
    } else if (kind == "heavy_tail") {
      s.profile_kind = ProfileKind::HeavyTail;
      s.beta = detail::get_or(prof, "beta", 1.5);
      s.h0 = detail::get_or(prof, "h0", 1.0);
      s.cut_a = detail::get_or(prof, "a", 0.25);
      s.cut_b = detail::get_or(prof, "b", 0.45);
    } else {
      throw ConfigError("ensemble.profile.kind must be 'gaussian' or 'heavy_tail'");
    }
  }

  const std::string cls = detail::get_or<std::string>(ens, "class", "complex_hermitian");
  if (cls == "complex_hermitian")
    s.symmetry = SymmetryClass::ComplexHermitian;
  else if (cls == "real_symmetric")
    s.symmetry = SymmetryClass::RealSymmetric;
  else
    throw ConfigError("ensemble.class must be 'complex_hermitian' or 'real_symmetric'");

  const std::string dist = detail::get_or<std::string>(ens, "distribution", "gaussian");
  if (dist == "gaussian")
    s.distribution = EntryDistribution::Gaussian;
  else if (dist == "bernoulli")
    s.distribution = EntryDistribution::BernoulliPm1;
  else if (dist == "uniform")
    s.distribution = EntryDistribution::UniformUnitVar;
  else
    throw ConfigError("ensemble.distribution must be 'gaussian', 'bernoulli' or 'uniform'");

  s.epsilon = detail::get_or(ens, "epsilon", 0.0);
  if (!(s.epsilon >= 0.0 && s.epsilon <= 0.5))
    throw ConfigError("ensemble.epsilon must lie in [0, 1/2]");

  if (doc.contains("spectral")) {
    const json& sp = doc.at("spectral");
    detail::reject_unknown(sp, {"kappa", "gamma", "E_list", "eta_list"}, "spectral");
    s.kappa = detail::get_or(sp, "kappa", 0.1);
    s.gamma = detail::get_or(sp, "gamma", 0.1);
    if (!(s.kappa > 0.0 && s.kappa < 2.0)) throw ConfigError("spectral.kappa must be in (0,2)");
    if (!(s.gamma > 0.0 && s.gamma < 1.0)) throw ConfigError("spectral.gamma must be in (0,1)");
    s.E_list = detail::get_or(sp, "E_list", std::vector<double>{0.0});
    s.eta_list = detail::get_or(sp, "eta_list", std::vector<double>{0.5});
    if (s.E_list.empty() || s.eta_list.empty())
      throw ConfigError("spectral.E_list and spectral.eta_list must be nonempty");
  }

  if (doc.contains("run")) {
    const json& run = doc.at("run");
    detail::reject_unknown(
        run, {"trials", "seed", "observables", "memory_budget_mb", "deloc_ell", "deloc_eps"},
        "run");
    s.trials = detail::get_or(run, "trials", 1);
    if (s.trials < 1) throw ConfigError("run.trials must be >= 1");
    s.master_seed = detail::get_or<std::uint64_t>(run, "seed", 1);
    s.memory_budget_mb = detail::get_or(run, "memory_budget_mb", 4096.0);
    s.deloc_ell = detail::get_or<std::int64_t>(run, "deloc_ell", 0);
    s.deloc_eps = detail::get_or(run, "deloc_eps", 0.1);
    if (run.contains("observables")) {
      s.obs_lambda = s.obs_t_profile = s.obs_residual = s.obs_deloc = false;
      for (const auto& o : run.at("observables")) {
        const std::string name = o.get<std::string>();
        if (name == "lambda")
          s.obs_lambda = true;
        else if (name == "t_profile")
          s.obs_t_profile = true;
        else if (name == "residual")
          s.obs_residual = true;
        else if (name == "deloc")
          s.obs_deloc = true;
        else
          throw ConfigError("unknown observable '" + name + "'");
      }
    }
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    detail::reject_unknown(o, {"directory", "formats"}, "output");
    s.out_dir = detail::get_or<std::string>(o, "directory", "out");
    if (o.contains("formats")) {
      s.write_csv = s.write_json = false;
      for (const auto& f : o.at("formats")) {
        const std::string name = f.get<std::string>();
        if (name == "csv")
          s.write_csv = true;
        else if (name == "json")
          s.write_json = true;
        else
          throw ConfigError("output.formats entries must be 'csv' or 'json'");
      }
    }
  }

  // physical checks that need the built profile: may throw ConfigError,
  // W-range violations only warn
  VarianceMatrix S = s.build_variance();
  if (!S.warning().empty()) out.warnings.push_back(S.warning());
  try {
    validate_z_grid(s, S);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (s.estimated_trial_mb() > s.memory_budget_mb)
    throw ConfigError("memory budget exceeded: one trial needs about " +
                      std::to_string(s.estimated_trial_mb()) + " MB, budget is " +
                      std::to_string(s.memory_budget_mb) + " MB");
  return out;
}

/// Serializes a spec back to the config schema; parse(serialize(parse(x)))
/// equals parse(x).
inline nlohmann::json serialize_config(const ExperimentSpec& s) {
  nlohmann::json doc;
  doc["ensemble"]["d"] = s.d;
  doc["ensemble"]["L"] = s.L;
  doc["ensemble"]["W"] = s.W;
  doc["ensemble"]["delta"] = s.delta;
  if (s.profile_kind == ProfileKind::HeavyTail) {
    doc["ensemble"]["profile"] = {{"kind", "heavy_tail"},
                                  {"beta", s.beta},
                                  {"h0", s.h0},
                                  {"a", s.cut_a},
                                  {"b", s.cut_b}};
  } else {
    doc["ensemble"]["profile"] = {{"kind", "gaussian"}};
  }
  doc["ensemble"]["class"] =
      s.symmetry == SymmetryClass::ComplexHermitian ? "complex_hermitian" : "real_symmetric";
  switch (s.distribution) {
    case EntryDistribution::Gaussian:
      doc["ensemble"]["distribution"] = "gaussian";
      break;
    case EntryDistribution::BernoulliPm1:
      doc["ensemble"]["distribution"] = "bernoulli";
      break;
    case EntryDistribution::UniformUnitVar:
      doc["ensemble"]["distribution"] = "uniform";
      break;
  }
  doc["ensemble"]["epsilon"] = s.epsilon;
  doc["spectral"]["kappa"] = s.kappa;
  doc["spectral"]["gamma"] = s.gamma;
  doc["spectral"]["E_list"] = s.E_list;
  doc["spectral"]["eta_list"] = s.eta_list;
  doc["run"]["trials"] = s.trials;
  doc["run"]["seed"] = s.master_seed;
  std::vector<std::string> obs;
  if (s.obs_lambda) obs.push_back("lambda");
  if (s.obs_t_profile) obs.push_back("t_profile");
  if (s.obs_residual) obs.push_back("residual");
  if (s.obs_deloc) obs.push_back("deloc");
  doc["run"]["observables"] = obs;
  doc["run"]["memory_budget_mb"] = s.memory_budget_mb;
  doc["run"]["deloc_ell"] = s.deloc_ell;
  doc["run"]["deloc_eps"] = s.deloc_eps;
  doc["output"]["directory"] = s.out_dir;
  std::vector<std::string> formats;
  if (s.write_csv) formats.push_back("csv");
  if (s.write_json) formats.push_back("json");
  doc["output"]["formats"] = formats;
  return doc;
}

}  // namespace bandlab
