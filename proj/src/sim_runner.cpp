#include "qforma/sim_runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "qforma/agents.hpp"
#include "qforma/cognition.hpp"
#include "qforma/env_sim.hpp"
#include "qforma/error.hpp"
#include "qforma/rng.hpp"

namespace qforma::sim {

using decision::wire_agent_id;

// ---------------------------------------------------------------------------
// Configuration

void validate(const SimulationConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ConfigError, what); };
  if (c.days < 1) fail("days must be >= 1");
  if (c.agent_count < 1) fail("agent_count must be >= 1");
  if (c.feedings_per_day < 1) fail("feedings_per_day must be >= 1");
  if (c.initial_vegetables < 0) fail("initial_vegetables must be >= 0");
  if (c.regrow_watered < 1) fail("regrow_watered must be >= 1");
  if (c.regrow_unwatered < c.regrow_watered) fail("regrow_unwatered must be >= regrow_watered");
  if (!(c.p_unhappy >= 0.0 && c.p_unhappy <= 1.0)) fail("p_unhappy must lie in [0,1]");
  if (c.method < 1 || c.method > 3) fail("method must be 1, 2 or 3");
  if (c.max_rounds < 1) fail("max_rounds must be >= 1");
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) fail("epsilon must lie in [0,1]");
  if (!(c.backend_timeout_s > 0.0)) fail("backend_timeout_s must be > 0");
  c.thresholds.validate();
}

namespace {

template <typename T>
void read_key(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ThresholdConfig thresholds_from_json(const Json& j) {
  static const std::set<std::string> known = {"anomaly_delta",      "factor_tolerance",  "default_tolerance",
                                              "safety_margin",      "impact_threshold",  "exploration_lambda",
                                              "time_weight",        "cost_weight",       "importance_threshold"};
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "thresholds must be an object");
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw Error(ErrorKind::ConfigError, "unknown thresholds key '" + k + "'");
  ThresholdConfig t;
  read_key(j, "anomaly_delta", t.anomaly_delta);
  if (j.contains("factor_tolerance"))
    for (const auto& [k, v] : j.at("factor_tolerance").items()) t.factor_tolerance[k] = v.get<double>();
  read_key(j, "default_tolerance", t.default_tolerance);
  read_key(j, "safety_margin", t.safety_margin);
  read_key(j, "impact_threshold", t.impact_threshold);
  read_key(j, "exploration_lambda", t.exploration_lambda);
  read_key(j, "time_weight", t.time_weight);
  read_key(j, "cost_weight", t.cost_weight);
  read_key(j, "importance_threshold", t.importance_threshold);
  return t;
}

}  // namespace

SimulationConfig config_from_json(const Json& j) {
  static const std::set<std::string> known = {
      "days",   "agent_count", "feedings_per_day", "initial_vegetables", "regrow_watered",   "regrow_unwatered",
      "p_unhappy", "method",   "backend",          "backend_url",        "backend_timeout_s", "max_rounds",
      "seed",   "learning_enabled", "epsilon",     "thresholds"};
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw Error(ErrorKind::ConfigError, "unknown config key '" + k + "'");

  SimulationConfig c;
  try {
    read_key(j, "days", c.days);
    read_key(j, "agent_count", c.agent_count);
    read_key(j, "feedings_per_day", c.feedings_per_day);
    read_key(j, "initial_vegetables", c.initial_vegetables);
    read_key(j, "regrow_watered", c.regrow_watered);
    read_key(j, "regrow_unwatered", c.regrow_unwatered);
    read_key(j, "p_unhappy", c.p_unhappy);
    read_key(j, "method", c.method);
    if (j.contains("backend")) {
      const auto b = j.at("backend").get<std::string>();
      if (b == "scripted")
        c.backend = BackendKind::Scripted;
      else if (b == "http")
        c.backend = BackendKind::Http;
      else
        throw Error(ErrorKind::ConfigError, "backend must be \"scripted\" or \"http\"");
    }
    read_key(j, "backend_url", c.backend_url);
    read_key(j, "backend_timeout_s", c.backend_timeout_s);
    read_key(j, "max_rounds", c.max_rounds);
    read_key(j, "seed", c.seed);
    read_key(j, "learning_enabled", c.learning_enabled);
    read_key(j, "epsilon", c.epsilon);
    if (j.contains("thresholds")) c.thresholds = thresholds_from_json(j.at("thresholds"));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  validate(c);
  return c;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::ConfigError, "config " + path.string() + " is not valid JSON");
  return config_from_json(j);
}

Json to_json(const SimulationConfig& c) {
  Json tol = Json::object();
  for (const auto& [k, v] : c.thresholds.factor_tolerance) tol[k] = v;
  return {{"days", c.days},
          {"agent_count", c.agent_count},
          {"feedings_per_day", c.feedings_per_day},
          {"initial_vegetables", c.initial_vegetables},
          {"regrow_watered", c.regrow_watered},
          {"regrow_unwatered", c.regrow_unwatered},
          {"p_unhappy", c.p_unhappy},
          {"method", c.method},
          {"backend", c.backend == BackendKind::Scripted ? "scripted" : "http"},
          {"backend_url", c.backend_url},
          {"backend_timeout_s", c.backend_timeout_s},
          {"max_rounds", c.max_rounds},
          {"seed", c.seed},
          {"learning_enabled", c.learning_enabled},
          {"epsilon", c.epsilon},
          {"thresholds",
           {{"anomaly_delta", c.thresholds.anomaly_delta},
            {"factor_tolerance", tol},
            {"default_tolerance", c.thresholds.default_tolerance},
            {"safety_margin", c.thresholds.safety_margin},
            {"impact_threshold", c.thresholds.impact_threshold},
            {"exploration_lambda", c.thresholds.exploration_lambda},
            {"time_weight", c.thresholds.time_weight},
            {"cost_weight", c.thresholds.cost_weight},
            {"importance_threshold", c.thresholds.importance_threshold}}}};
}

void apply_env_overrides(SimulationConfig& config) {
  if (const char* url = std::getenv(kBackendUrlEnv); url != nullptr && *url != '\0') config.backend_url = url;
}

std::unique_ptr<decision::DecisionBackend> make_backend(const SimulationConfig& config) {
  if (config.backend == BackendKind::Scripted) return std::make_unique<decision::ScriptedBackend>();
  if (config.backend_url.empty())
    throw Error(ErrorKind::BackendStartup, "http backend selected but no backend_url or " +
                                               std::string(kBackendUrlEnv) + " given");
  const auto timeout = std::chrono::milliseconds(static_cast<long long>(std::llround(config.backend_timeout_s * 1000)));
  return std::make_unique<decision::HttpBackend>(config.backend_url, timeout);
}

// ---------------------------------------------------------------------------
// Run loop

namespace {

template <typename F>
std::vector<int> series(const std::vector<stats::DailyMetrics>& daily, F field) {
  std::vector<int> out;
  out.reserve(daily.size());
  for (const auto& d : daily) out.push_back(field(d));
  return out;
}

std::vector<QuestionKind> unique_kinds(const std::vector<Question>& questions) {
  std::vector<QuestionKind> kinds;
  for (const auto& q : questions)
    if (std::find(kinds.begin(), kinds.end(), q.kind) == kinds.end()) kinds.push_back(q.kind);
  return kinds;
}

Json summary_json(const stats::SummaryStats& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"n", s.n}, {"std_defined", s.std_defined}};
}

}  // namespace

std::vector<int> RunArtifacts::no_eat_series() const {
  return series(daily, [](const auto& d) { return d.no_eat_events; });
}
std::vector<int> RunArtifacts::watering_series() const {
  return series(daily, [](const auto& d) { return d.watering_actions; });
}
std::vector<int> RunArtifacts::greeting_series() const {
  return series(daily, [](const auto& d) { return d.greeting_actions; });
}
std::vector<int> RunArtifacts::remaining_series() const {
  return series(daily, [](const auto& d) { return d.remaining_vegetables; });
}

RunArtifacts run_simulation(const SimulationConfig& config) {
  validate(config);
  auto backend = make_backend(config);
  return run_simulation(config, *backend);
}

RunArtifacts run_simulation(const SimulationConfig& config, decision::DecisionBackend& backend) {
  validate(config);
  const Scope scope = config.scope();
  const int meal_interval = config.hours_between_meals();
  const std::vector<double> sensor_norm{static_cast<double>(meal_interval)};
  const int sustainable_stock = config.agent_count * config.feedings_per_day * config.regrow_watered;

  RunArtifacts out;
  Rng rng(config.seed);
  env::Field field(config.initial_vegetables, config.regrow_watered, config.regrow_unwatered);
  agents::Population pop(config.agent_count, meal_interval);

  auto event = [&out](Json e) { out.events.push_back(std::move(e)); };
  event({{"type", "run_start"},
         {"method", config.method},
         {"seed", config.seed},
         {"days", config.days},
         {"agents", config.agent_count},
         {"feedings_per_day", config.feedings_per_day},
         {"initial_vegetables", config.initial_vegetables}});

  int cumulative_no_eat = 0;
  int fallbacks = 0;

  for (int day = 1; day <= config.days; ++day) {
    const int matured = field.daily_tick();
    event({{"type", "tick"}, {"day", day}, {"matured", matured}});

    pop.start_day();
    agents::sample_moods(pop, config.p_unhappy, rng);
    {
      Json moods = Json::array();
      for (const auto& a : pop.agents) moods.push_back({{"id", wire_agent_id(a.id)}, {"mood", to_string(a.mood)}});
      event({{"type", "moods"}, {"day", day}, {"moods", std::move(moods)}});
    }

    stats::DailyMetrics metrics;
    metrics.day = day;

    for (const auto& [slot, id] : agents::feeding_schedule(day, config.agent_count, config.feedings_per_day)) {
      pop.start_feeding_event(id);
      const Json tags{{"day", day}, {"slot", slot}};

      std::optional<AgentId> met;
      if (pop.size() >= 2) {
        met = agents::encounter(id, pop, rng);
        pop.log.push_back({day, slot, id, *met, agents::InteractionKind::Encounter});
        event({{"type", "encounter"}, {"day", day}, {"slot", slot}, {"agent", wire_agent_id(id)},
               {"target", wire_agent_id(*met)}});
      }

      auto& self = pop.at(id);
      ContextSnapshot internal_ctx;
      internal_ctx.day = day;
      internal_ctx.slot = slot;
      internal_ctx.internal = {true, self.hours_since_meal, {static_cast<double>(self.hours_since_meal)}};

      decision::ContextProvider provider;
      provider.environment = [&field, &config, sustainable_stock] {
        const auto census = field.census();
        EnvView v;
        v.edible_count = census.edible_count;
        v.regrowing_count = census.regrowing_count;
        v.per_factor = {
            {"edible", static_cast<double>(census.edible_count), static_cast<double>(sustainable_stock),
             config.thresholds.tolerance_for("edible")},
            {"regrowing", static_cast<double>(census.regrowing_count), 0.0,
             config.thresholds.tolerance_for("regrowing")},
        };
        return v;
      };
      provider.agents = [&pop, id, met] {
        AgentView v;
        for (const auto& a : pop.agents)
          if (a.id != id) v.others.push_back({a.id, a.mood});
        v.encountered = met;
        return v;
      };

      std::optional<QuestionKind> question;
      ContextSig sig;
      if (config.learning_enabled) {
        ContextSnapshot scoped = internal_ctx;
        if (includes_environment(scope)) scoped.environment = provider.environment();
        if (includes_agents(scope)) scoped.agents = provider.agents();
        sig = signature_of(scoped, scope);
        const auto kinds = unique_kinds(cognition::form_questions(scoped, config.thresholds, sensor_norm));
        question = learning::select_question(out.memory, sig, kinds, config.epsilon, rng);
        event({{"type", "question"}, {"day", day}, {"slot", slot}, {"agent", wire_agent_id(id)},
               {"kind", to_string(*question)}, {"context_sig", to_string(sig)}});
      }

      decision::LoopOptions opts;
      opts.max_rounds = config.max_rounds;
      opts.prompt_log = [&out](Json e) { out.prompts.push_back(std::move(e)); };
      opts.event_log = [&out](Json e) { out.events.push_back(std::move(e)); };
      opts.log_tags = tags;
      const auto loop = decision::decide_loop(backend, scope, id, internal_ctx, provider, opts);
      if (loop.fell_back) ++fallbacks;

      // Greet -> Eat -> Water, whatever order the backend listed them in.
      Outcome outcome;
      bool wants_eat = false;
      bool wants_water = false;
      for (const auto& a : loop.actions) {
        if (const auto* g = std::get_if<action::Greet>(&a)) {
          if (g->target < 0 || g->target >= config.agent_count) {
            event({{"type", "invalid_action"}, {"day", day}, {"slot", slot}, {"agent", wire_agent_id(id)},
                   {"reason", "greet target out of range"}});
            continue;
          }
          agents::greet(pop, id, g->target, day, slot);
          outcome.greeted = true;
          ++metrics.greeting_actions;
          event({{"type", "greet"}, {"day", day}, {"slot", slot}, {"agent", wire_agent_id(id)},
                 {"target", wire_agent_id(g->target)}});
        } else if (std::holds_alternative<action::Eat>(a)) {
          wants_eat = true;
        } else if (std::holds_alternative<action::Water>(a)) {
          wants_water = true;
        }
      }

      std::optional<env::PlotId> eaten;
      if (wants_eat) eaten = field.consume();
      if (eaten) {
        outcome.ate = true;
        ++self.meals_today;
        event({{"type", "eat"}, {"day", day}, {"slot", slot}, {"agent", wire_agent_id(id)}, {"plot", *eaten}});
      } else {
        outcome.no_eat = true;
        ++self.no_eat_total;
        ++metrics.no_eat_events;
        event({{"type", "no_eat"}, {"day", day}, {"slot", slot}, {"agent", wire_agent_id(id)},
               {"reason", wants_eat ? "no_food" : "no_eat_action"}});
      }

      if (eaten && wants_water) {
        const Mood met_mood = met ? pop.at(*met).mood : Mood::Happy;
        if (agents::watering_permitted(met_mood, self.greeted_this_event)) {
          field.water(*eaten);
          outcome.watered = true;
          ++metrics.watering_actions;
          event({{"type", "water"}, {"day", day}, {"slot", slot}, {"agent", wire_agent_id(id)}, {"plot", *eaten}});
        } else {
          event({{"type", "water_suppressed"}, {"day", day}, {"slot", slot}, {"agent", wire_agent_id(id)},
                 {"unhappy", wire_agent_id(*met)}});
        }
      }

      outcome.utility = utility_of_outcome(outcome);
      self.history.push_back(outcome);
      self.hours_since_meal = outcome.ate ? meal_interval : self.hours_since_meal + meal_interval;

      if (config.learning_enabled) {
        out.memory.record({sig, *question, loop.actions, outcome, outcome.utility});
      }
    }

    const auto census = field.census();
    metrics.remaining_vegetables = census.edible_count;
    cumulative_no_eat += metrics.no_eat_events;
    metrics.cumulative_no_eat = cumulative_no_eat;
    event({{"type", "day_end"}, {"day", day}, {"edible", census.edible_count}, {"regrowing", census.regrowing_count}});
    out.daily.push_back(metrics);
  }

  int safe_agents = 0;
  for (const auto& a : pop.agents)
    if (is_safe(a.history, config.feedings_per_day)) ++safe_agents;

  out.summary = {
      {"method", config.method},
      {"scope", to_string(scope)},
      {"seed", config.seed},
      {"backend", backend.name()},
      {"days", config.days},
      {"cumulative_no_eat", cumulative_no_eat},
      {"no_eat", summary_json(stats::summarize(stats::to_doubles(out.no_eat_series())))},
      {"watering", summary_json(stats::summarize(stats::to_doubles(out.watering_series())))},
      {"greeting", summary_json(stats::summarize(stats::to_doubles(out.greeting_series())))},
      {"remaining_vegetables", summary_json(stats::summarize(stats::to_doubles(out.remaining_series())))},
      {"fallbacks", fallbacks},
      {"agents_safe_at_end", safe_agents},
      {"config", to_json(config)},
  };
  return out;
}

std::vector<stats::DailyMetrics> replay_daily_metrics(const std::vector<Json>& events) {
  std::vector<stats::DailyMetrics> days;
  int edible = 0;
  int cumulative_no_eat = 0;
  for (const auto& e : events) {
    const auto type = e.at("type").get<std::string>();
    if (type == "run_start") {
      edible = e.at("initial_vegetables").get<int>();
    } else if (type == "tick") {
      days.push_back({});
      days.back().day = e.at("day").get<int>();
      edible += e.at("matured").get<int>();
    } else if (type == "eat") {
      --edible;
    } else if (type == "no_eat") {
      ++days.back().no_eat_events;
    } else if (type == "water") {
      ++days.back().watering_actions;
    } else if (type == "greet") {
      ++days.back().greeting_actions;
    } else if (type == "day_end") {
      days.back().remaining_vegetables = edible;
      cumulative_no_eat += days.back().no_eat_events;
      days.back().cumulative_no_eat = cumulative_no_eat;
    }
  }
  return days;
}

// ---------------------------------------------------------------------------
// Comparison

std::vector<std::map<std::string, double>> MethodAggregate::daily_curves() const {
  std::vector<std::map<std::string, double>> curves;
  if (runs.empty()) return curves;
  const std::size_t days = runs.front().size();
  curves.resize(days);
  for (const auto& run : runs) {
    for (std::size_t d = 0; d < days; ++d) {
      curves[d]["remaining_vegetables"] += run[d].remaining_vegetables;
      curves[d]["watering_actions"] += run[d].watering_actions;
      curves[d]["greeting_actions"] += run[d].greeting_actions;
      curves[d]["no_eat_events"] += run[d].no_eat_events;
      curves[d]["cumulative_no_eat"] += run[d].cumulative_no_eat;
    }
  }
  for (auto& day : curves)
    for (auto& [k, v] : day) v /= static_cast<double>(runs.size());
  return curves;
}

ComparisonReport compare_methods(const SimulationConfig& base, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw Error(ErrorKind::ConfigError, "compare_methods needs at least one seed");
  validate(base);
  ComparisonReport report;
  report.seeds = seeds;
  for (int method = 1; method <= 3; ++method) {
    auto& agg = report.methods[method];
    agg.method = method;
    for (auto seed : seeds) {
      SimulationConfig cfg = base;
      cfg.method = method;
      cfg.seed = seed;
      auto run = run_simulation(cfg);
      for (const auto& d : run.daily) {
        agg.no_eat.push_back(d.no_eat_events);
        agg.watering.push_back(d.watering_actions);
        agg.greeting.push_back(d.greeting_actions);
        agg.remaining.push_back(d.remaining_vegetables);
      }
      agg.final_cumulative.push_back(run.daily.back().cumulative_no_eat);
      agg.runs.push_back(std::move(run.daily));
    }
  }
  auto pooled_test = [&](int a, int b) -> stats::TTestResult {
    const auto& xa = report.methods.at(a).no_eat;
    const auto& xb = report.methods.at(b).no_eat;
    if (xa.size() < 2 || xb.size() < 2) return {};
    return stats::welch_t_test(xa, xb);
  };
  report.m1_vs_m2 = pooled_test(1, 2);
  report.m2_vs_m3 = pooled_test(2, 3);
  return report;
}

Json ComparisonReport::to_json() const {
  auto test_json = [](const stats::TTestResult& t) {
    // infinite t (zero-variance separation) has no JSON number form
    Json tj = std::isfinite(t.t) ? Json(t.t) : Json(t.t > 0 ? "inf" : "-inf");
    return Json{{"t", tj}, {"df", t.df}, {"p_two_sided", t.p_two_sided}, {"degenerate", t.degenerate}};
  };
  Json methods_json = Json::object();
  for (const auto& [m, agg] : methods) {
    Json curves = Json::array();
    int day = 1;
    for (const auto& c : agg.daily_curves()) {
      Json row{{"day", day++}};
      for (const auto& [k, v] : c) row[k] = v;
      curves.push_back(std::move(row));
    }
    methods_json[std::to_string(m)] = {{"no_eat", summary_json(agg.no_eat_summary())},
                                       {"watering", summary_json(agg.watering_summary())},
                                       {"greeting", summary_json(agg.greeting_summary())},
                                       {"remaining_vegetables", summary_json(agg.remaining_summary())},
                                       {"final_cumulative_no_eat", summary_json(agg.cumulative_summary())},
                                       {"daily_mean_curves", std::move(curves)}};
  }
  return {{"seeds", seeds},
          {"methods", std::move(methods_json)},
          {"welch", {{"m1_vs_m2", test_json(m1_vs_m2)}, {"m2_vs_m3", test_json(m2_vs_m3)}}}};
}

// ---------------------------------------------------------------------------
// Artifacts

std::string daily_csv(const std::vector<stats::DailyMetrics>& daily) {
  std::ostringstream os;
  stats::write_daily_csv(os, daily);
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

std::string jsonl(const std::vector<Json>& lines) {
  std::string s;
  for (const auto& l : lines) {
    s += l.dump();
    s += '\n';
  }
  return s;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  write_file(out_dir / "daily.csv", daily_csv(artifacts.daily));
  write_file(out_dir / "events.jsonl", jsonl(artifacts.events));
  write_file(out_dir / "prompts.jsonl", jsonl(artifacts.prompts));
  write_file(out_dir / "summary.json", artifacts.summary.dump(2) + "\n");
  write_file(out_dir / "memory.json", learning::to_json(artifacts.memory).dump(2) + "\n");
}

void write_comparison(const ComparisonReport& report, const std::filesystem::path& out_dir) {
  ensure_dir(out_dir);
  write_file(out_dir / "compare.json", report.to_json().dump(2) + "\n");
  std::string csv = "method,day,remaining_vegetables,watering_actions,greeting_actions,no_eat_events,cumulative_no_eat\n";
  for (const auto& [m, agg] : report.methods) {
    int day = 1;
    for (const auto& c : agg.daily_curves()) {
      csv += std::to_string(m) + "," + std::to_string(day++);
      for (const char* key :
           {"remaining_vegetables", "watering_actions", "greeting_actions", "no_eat_events", "cumulative_no_eat"})
        csv += "," + fixed4(c.at(key));
      csv += "\n";
    }
  }
  write_file(out_dir / "curves.csv", csv);
}

}  // namespace qforma::sim
