// bandlab: random band-matrix laboratory
//   sample   run a seeded Monte Carlo experiment from a config
//   profile  deterministic diffusion-profile tables (no sampling)
//   verify   built-in acceptance suites at desk-scale parameters
//   sweep    run a config across an axis and fit log-log slopes

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "bandlab/config.hpp"
#include "bandlab/results.hpp"
#include "bandlab/verify.hpp"

namespace {

int default_threads() {
  if (const char* env = std::getenv("BANDLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

bandlab::ParsedConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw bandlab::ConfigError("cannot read config file '" + path + "'");
  nlohmann::json doc;
  try {
    f >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw bandlab::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return bandlab::parse_config(doc);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bandlab: numerical laboratory for random band matrices"};
  app.require_subcommand(1);

  int threads = default_threads();
  app.add_option("--threads", threads,
                 "worker threads (affects speed only, never results)");

  std::string config_path, out_dir, axis_name, values_csv, suite = "all";
  std::uint64_t seed_override = 0;
  bool has_seed = false;

  CLI::App* sample = app.add_subcommand("sample", "run a Monte Carlo experiment");
  sample->add_option("--config", config_path, "config JSON path")->required();
  sample->add_option("--out", out_dir, "output directory (overrides config)");
  sample->add_option("--seed", seed_override, "master seed override")
      ->each([&](const std::string&) { has_seed = true; });

  CLI::App* profile = app.add_subcommand("profile", "deterministic profile tables");
  profile->add_option("--config", config_path, "config JSON path")->required();
  profile->add_option("--out", out_dir, "output directory (overrides config)");

  CLI::App* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("suite", suite, "identities|profile|lde|deloc|all");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep an axis, fit slopes");
  sweep_cmd->add_option("--config", config_path, "config JSON path")->required();
  sweep_cmd->add_option("--axis", axis_name, "N|W|eta|epsilon|beta")->required();
  sweep_cmd->add_option("--values", values_csv, "comma-separated axis values")->required();
  sweep_cmd->add_option("--out", out_dir, "output directory (overrides config)");
  sweep_cmd->add_option("--seed", seed_override, "master seed override")
      ->each([&](const std::string&) { has_seed = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (sample->parsed()) {
      auto cfg = load_config(config_path);
      print_warnings(cfg.warnings);
      if (has_seed) cfg.spec.master_seed = seed_override;
      if (!out_dir.empty()) cfg.spec.out_dir = out_dir;
      try {
        bandlab::RunRecord rec = bandlab::run_experiment(cfg.spec, threads);
        const auto files = bandlab::write_result_bundle(rec, cfg.warnings, cfg.spec.out_dir);
        std::cout << "wrote " << files.size() << " files to " << cfg.spec.out_dir << '\n';
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
      }
      return 0;
    }
    if (profile->parsed()) {
      auto cfg = load_config(config_path);
      print_warnings(cfg.warnings);
      if (!out_dir.empty()) cfg.spec.out_dir = out_dir;
      try {
        std::filesystem::create_directories(cfg.spec.out_dir);
        bandlab::write_profile_compare_csv(
            cfg.spec, std::filesystem::path(cfg.spec.out_dir) / "profile_compare.csv");
        std::cout << "wrote profile_compare.csv to " << cfg.spec.out_dir << '\n';
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
      }
      return 0;
    }
    if (verify->parsed()) {
      std::vector<bandlab::CriterionResult> results;
      try {
        results = bandlab::run_acceptance_suite(suite, threads);
      } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      }
      return bandlab::report_criteria(results);
    }
    if (sweep_cmd->parsed()) {
      auto cfg = load_config(config_path);
      print_warnings(cfg.warnings);
      if (has_seed) cfg.spec.master_seed = seed_override;
      if (!out_dir.empty()) cfg.spec.out_dir = out_dir;

      bandlab::SweepAxis axis;
      if (axis_name == "N")
        axis = bandlab::SweepAxis::N;
      else if (axis_name == "W")
        axis = bandlab::SweepAxis::W;
      else if (axis_name == "eta")
        axis = bandlab::SweepAxis::Eta;
      else if (axis_name == "epsilon")
        axis = bandlab::SweepAxis::Epsilon;
      else if (axis_name == "beta")
        axis = bandlab::SweepAxis::Beta;
      else {
        std::cerr << "error: unknown axis '" << axis_name << "'\n";
        return 2;
      }
      std::vector<double> values;
      {
        std::stringstream ss(values_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
      }
      if (values.empty()) {
        std::cerr << "error: empty --values\n";
        return 2;
      }
      // validate every instantiated spec before running anything
      try {
        for (double v : values) {
          bandlab::ExperimentSpec inst = bandlab::instantiate_axis(cfg.spec, axis, v);
          bandlab::parse_config(bandlab::serialize_config(inst));
        }
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      }
      try {
        bandlab::SweepResult sw = bandlab::sweep(cfg.spec, axis, values, threads);
        const std::filesystem::path base(cfg.spec.out_dir);
        std::filesystem::create_directories(base);
        for (std::size_t i = 0; i < sw.records.size(); ++i) {
          const std::filesystem::path dir =
              base / (axis_name + "_" + bandlab::fmt_tag(sw.values[i]));
          bandlab::write_result_bundle(sw.records[i], cfg.warnings, dir);
        }
        bandlab::write_fit_summary_csv(sw, axis_name, base / "fit_summary.csv");
        std::cout << "wrote " << sw.records.size() << " bundles + fit_summary.csv to "
                  << cfg.spec.out_dir << '\n';
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
      }
      return 0;
    }
  } catch (const bandlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
