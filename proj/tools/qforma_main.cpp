// qforma: run, compare and validate question-formation simulations.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qforma/error.hpp"
#include "qforma/sim_runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitBackend = 4;

int exit_code_for(qforma::ErrorKind kind) {
  switch (kind) {
    case qforma::ErrorKind::IoError: return kExitIo;
    case qforma::ErrorKind::BackendStartup: return kExitBackend;
    default: return kExitConfig;
  }
}

qforma::sim::SimulationConfig load(const std::string& path) {
  auto config = qforma::sim::load_config(path);
  qforma::sim::apply_env_overrides(config);
  return config;
}

void print_run(const qforma::sim::RunArtifacts& run) {
  const auto& s = run.summary;
  std::cout << "method " << s["method"] << " seed " << s["seed"] << ": cumulative no-eat "
            << s["cumulative_no_eat"] << ", daily no-eat mean " << s["no_eat"]["mean"] << " (sd "
            << s["no_eat"]["std"] << "), watering/day " << s["watering"]["mean"] << ", greetings/day "
            << s["greeting"]["mean"] << "\n";
}

void print_comparison(const qforma::sim::ComparisonReport& report) {
  for (const auto& [m, agg] : report.methods) {
    const auto ne = agg.no_eat_summary();
    std::cout << "method " << m << ": no-eat/day " << ne.mean << " (sd " << ne.std << "), cumulative "
              << agg.cumulative_summary().mean << ", watering/day " << agg.watering_summary().mean
              << ", greetings/day " << agg.greeting_summary().mean << ", remaining "
              << agg.remaining_summary().mean << "\n";
  }
  std::cout << "welch M1 vs M2: t=" << report.m1_vs_m2.t << " df=" << report.m1_vs_m2.df
            << " p=" << report.m1_vs_m2.p_two_sided << "\n";
  std::cout << "welch M2 vs M3: t=" << report.m2_vs_m3.t << " df=" << report.m2_vs_m3.df
            << " p=" << report.m2_vs_m3.p_two_sided << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qforma: prompting-scope simulations of resource-sharing agents"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> method;
  std::optional<std::uint64_t> seed;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run one simulation and write its artifacts");
  run->add_option("--config", config_path, "Config JSON file")->required();
  run->add_option("--method", method, "Prompting scope 1, 2 or 3")->check(CLI::Range(1, 3));
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--out", out_dir, "Output directory");

  int seed_count = 0;
  std::optional<std::uint64_t> seed_base;
  auto* compare = app.add_subcommand("compare", "Run all three methods over several seeds");
  compare->add_option("--config", config_path, "Config JSON file")->required();
  compare->add_option("--seeds", seed_count, "Number of seeds")->required()->check(CLI::PositiveNumber);
  compare->add_option("--seed-base", seed_base, "First seed (defaults to the config seed)");
  compare->add_option("--out", out_dir, "Output directory");

  auto* validate = app.add_subcommand("validate-config", "Check a config file");
  validate->add_option("--config", config_path, "Config JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (validate->parsed()) {
      auto config = load(config_path);
      qforma::sim::make_backend(config);
      std::cout << qforma::sim::to_json(config).dump(2) << "\n";
      return kExitOk;
    }

    if (run->parsed()) {
      auto config = load(config_path);
      if (method) config.method = *method;
      if (seed) config.seed = *seed;
      qforma::sim::validate(config);
      auto artifacts = qforma::sim::run_simulation(config);
      if (!out_dir.empty()) qforma::sim::write_artifacts(artifacts, out_dir);
      print_run(artifacts);
      return kExitOk;
    }

    if (compare->parsed()) {
      auto config = load(config_path);
      qforma::sim::make_backend(config);
      const std::uint64_t first = seed_base.value_or(config.seed);
      std::vector<std::uint64_t> seeds;
      for (int i = 0; i < seed_count; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
      auto report = qforma::sim::compare_methods(config, seeds);
      if (!out_dir.empty()) qforma::sim::write_comparison(report, out_dir);
      print_comparison(report);
      return kExitOk;
    }
  } catch (const qforma::Error& e) {
    std::cerr << "qforma: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kExitOk;
}
