#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qforma/core_model.hpp"
#include "qforma/decision.hpp"
#include "qforma/json.hpp"
#include "qforma/learning.hpp"
#include "qforma/metrics_stats.hpp"

namespace qforma::sim {

inline constexpr const char* kBackendUrlEnv = "QFORMA_BACKEND_URL";

enum class BackendKind { Scripted, Http };

struct SimulationConfig {
  int days = 20;
  int agent_count = 5;
  int feedings_per_day = 3;
  int initial_vegetables = 60;
  int regrow_watered = 4;
  int regrow_unwatered = 8;
  double p_unhappy = 0.5;
  int method = 1;
  BackendKind backend = BackendKind::Scripted;
  std::string backend_url;
  double backend_timeout_s = 30.0;
  int max_rounds = decision::kDefaultMaxRounds;
  std::uint64_t seed = 0;
  bool learning_enabled = false;
  double epsilon = 0.1;
  ThresholdConfig thresholds;

  Scope scope() const { return scope_from_method(method); }
  int hours_between_meals() const { return 24 / feedings_per_day; }
};

/// Throws ConfigError describing the first violated constraint.
void validate(const SimulationConfig& config);

/// Missing keys keep their defaults; unknown keys are rejected.
SimulationConfig config_from_json(const Json& j);
SimulationConfig load_config(const std::filesystem::path& path);
Json to_json(const SimulationConfig& config);

/// Applies QFORMA_BACKEND_URL when set and non-empty.
void apply_env_overrides(SimulationConfig& config);

/// Throws BackendStartup when the HTTP backend is selected without a usable URL.
std::unique_ptr<decision::DecisionBackend> make_backend(const SimulationConfig& config);

struct RunArtifacts {
  std::vector<stats::DailyMetrics> daily;
  std::vector<Json> events;
  std::vector<Json> prompts;
  learning::Memory memory;
  Json summary;

  std::vector<int> no_eat_series() const;
  std::vector<int> watering_series() const;
  std::vector<int> greeting_series() const;
  std::vector<int> remaining_series() const;
};

/// Runs one simulation with the backend described by `config`.
RunArtifacts run_simulation(const SimulationConfig& config);
/// Runs with a caller-supplied backend (the config's backend fields are ignored).
RunArtifacts run_simulation(const SimulationConfig& config, decision::DecisionBackend& backend);

/// Recomputes the daily metrics from an event log alone.
std::vector<stats::DailyMetrics> replay_daily_metrics(const std::vector<Json>& events);

struct MethodAggregate {
  int method = 1;
  std::vector<double> no_eat;     // daily values pooled across seeds
  std::vector<double> watering;
  std::vector<double> greeting;
  std::vector<double> remaining;
  std::vector<double> final_cumulative;  // one per seed
  std::vector<std::vector<stats::DailyMetrics>> runs;

  stats::SummaryStats no_eat_summary() const { return stats::summarize(no_eat); }
  stats::SummaryStats watering_summary() const { return stats::summarize(watering); }
  stats::SummaryStats greeting_summary() const { return stats::summarize(greeting); }
  stats::SummaryStats remaining_summary() const { return stats::summarize(remaining); }
  stats::SummaryStats cumulative_summary() const { return stats::summarize(final_cumulative); }
  /// Mean over seeds of each metric, per day.
  std::vector<std::map<std::string, double>> daily_curves() const;
};

struct ComparisonReport {
  std::vector<std::uint64_t> seeds;
  std::map<int, MethodAggregate> methods;  // keyed 1, 2, 3
  stats::TTestResult m1_vs_m2;
  stats::TTestResult m2_vs_m3;

  Json to_json() const;
};

ComparisonReport compare_methods(const SimulationConfig& base, const std::vector<std::uint64_t>& seeds);

/// Writes daily.csv, events.jsonl, prompts.jsonl, summary.json and memory.json. Throws IoError.
void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& out_dir);
/// Writes compare.json and curves.csv. Throws IoError.
void write_comparison(const ComparisonReport& report, const std::filesystem::path& out_dir);

std::string daily_csv(const std::vector<stats::DailyMetrics>& daily);

}  // namespace qforma::sim
