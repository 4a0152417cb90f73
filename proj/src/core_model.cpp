#include "qforma/core_model.hpp"

#include <algorithm>
#include <cmath>

#include "qforma/error.hpp"

namespace qforma {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySequence: return "EmptySequence";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::WateringNotApplicable: return "WateringNotApplicable";
    case ErrorKind::UnknownPlot: return "UnknownPlot";
    case ErrorKind::NoPeers: return "NoPeers";
    case ErrorKind::SelfGreeting: return "SelfGreeting";
    case ErrorKind::DimensionError: return "DimensionError";
    case ErrorKind::NoCandidates: return "NoCandidates";
    case ErrorKind::TooManyAgents: return "TooManyAgents";
    case ErrorKind::NormalizationError: return "NormalizationError";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::BackendError: return "BackendError";
    case ErrorKind::BackendStartup: return "BackendStartup";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Scope scope_from_method(int method) {
  if (method < 1 || method > 3) throw Error(ErrorKind::ConfigError, "method must be 1, 2 or 3");
  return static_cast<Scope>(method - 1);
}

int method_number(Scope scope) { return static_cast<int>(scope) + 1; }

std::string_view to_string(Mood mood) { return mood == Mood::Happy ? "happy" : "unhappy"; }

std::string_view to_string(Scope scope) {
  switch (scope) {
    case Scope::Internal: return "internal";
    case Scope::EnvironmentAware: return "environment_aware";
    case Scope::InterAgentAware: return "inter_agent_aware";
  }
  return "internal";
}

std::optional<Scope> scope_from_string(std::string_view name) {
  for (Scope s : {Scope::Internal, Scope::EnvironmentAware, Scope::InterAgentAware})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

bool ContextSnapshot::matches_scope(Scope scope) const {
  return environment.has_value() == includes_environment(scope) &&
         agents.has_value() == includes_agents(scope);
}

std::string_view to_string(QuestionKind kind) {
  switch (kind) {
    case QuestionKind::InternalRisk: return "internal_risk";
    case QuestionKind::ResourceShortage: return "resource_shortage";
    case QuestionKind::EnvironmentChange: return "environment_change";
    case QuestionKind::SocialObligation: return "social_obligation";
    case QuestionKind::MethodImprovement: return "method_improvement";
    case QuestionKind::LongHorizon: return "long_horizon";
    case QuestionKind::InformationGap: return "information_gap";
  }
  return "information_gap";
}

std::optional<QuestionKind> question_kind_from_string(std::string_view name) {
  for (QuestionKind k : kAllQuestionKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string_view action_name(const TaskAction& a) {
  struct Visitor {
    std::string_view operator()(const action::Eat&) const { return "eat"; }
    std::string_view operator()(const action::Water&) const { return "water"; }
    std::string_view operator()(const action::Greet&) const { return "greet"; }
    std::string_view operator()(const action::Idle&) const { return "idle"; }
    std::string_view operator()(const action::QueryEnvironment&) const { return "query_environment"; }
    std::string_view operator()(const action::QueryAgents&) const { return "query_agents"; }
  };
  return std::visit(Visitor{}, a);
}

ScarcityBucket scarcity_bucket(std::optional<int> edible_count) {
  if (!edible_count) return ScarcityBucket::Unknown;
  if (*edible_count < 15) return ScarcityBucket::Low;
  if (*edible_count <= 30) return ScarcityBucket::Medium;
  return ScarcityBucket::High;
}

std::string_view to_string(ScarcityBucket b) {
  switch (b) {
    case ScarcityBucket::Unknown: return "unknown";
    case ScarcityBucket::Low: return "low";
    case ScarcityBucket::Medium: return "medium";
    case ScarcityBucket::High: return "high";
  }
  return "unknown";
}

ContextSig signature_of(const ContextSnapshot& ctx, Scope scope) {
  ContextSig sig;
  sig.scope = scope;
  sig.hungry = ctx.internal.hungry;
  sig.scarcity = scarcity_bucket(ctx.environment ? std::optional<int>(ctx.environment->edible_count)
                                                 : std::nullopt);
  if (ctx.agents) {
    sig.any_unhappy = std::any_of(ctx.agents->others.begin(), ctx.agents->others.end(),
                                  [](const AgentMood& m) { return m.mood == Mood::Unhappy; });
  }
  return sig;
}

std::string to_string(const ContextSig& sig) {
  std::string out(to_string(sig.scope));
  out += sig.hungry ? "|hungry" : "|sated";
  out += "|";
  out += to_string(sig.scarcity);
  out += sig.any_unhappy ? "|unhappy" : "|calm";
  return out;
}

double ThresholdConfig::tolerance_for(const std::string& factor) const {
  auto it = factor_tolerance.find(factor);
  return it == factor_tolerance.end() ? default_tolerance : it->second;
}

void ThresholdConfig::validate() const {
  if (!(anomaly_delta >= 0.0)) throw Error(ErrorKind::ConfigError, "anomaly_delta must be >= 0");
  if (!(default_tolerance > 0.0)) throw Error(ErrorKind::ConfigError, "default_tolerance must be > 0");
  for (const auto& [id, tol] : factor_tolerance)
    if (!(tol > 0.0)) throw Error(ErrorKind::ConfigError, "tolerance for '" + id + "' must be > 0");
  if (!(exploration_lambda >= 0.0))
    throw Error(ErrorKind::ConfigError, "exploration_lambda must be >= 0");
  if (!(time_weight >= 0.0) || !(cost_weight >= 0.0))
    throw Error(ErrorKind::ConfigError, "method weights must be >= 0");
}

BeliefState::BeliefState(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error(ErrorKind::NormalizationError, "belief over an empty support");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::NormalizationError, "probability outside [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > kTolerance)
    throw Error(ErrorKind::NormalizationError, "probabilities sum to " + std::to_string(total));
}

BeliefState BeliefState::uniform(std::size_t n) {
  return BeliefState(std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n)));
}

BeliefState BeliefState::point_mass(std::size_t n, std::size_t at) {
  std::vector<double> p(n, 0.0);
  if (at < n) p[at] = 1.0;
  return BeliefState(std::move(p));
}

std::vector<ScopeTier> nested_tiers(const std::vector<std::string>& ordered_ids,
                                    const std::vector<std::size_t>& cumulative_sizes) {
  std::vector<ScopeTier> tiers;
  std::size_t prev = 0;
  for (std::size_t l = 0; l < cumulative_sizes.size(); ++l) {
    std::size_t n = cumulative_sizes[l];
    if (n > ordered_ids.size() || (l > 0 && n <= prev))
      throw Error(ErrorKind::ConfigError, "tier sizes must strictly increase within the id list");
    tiers.push_back({static_cast<int>(l), {ordered_ids.begin(), ordered_ids.begin() + static_cast<long>(n)}});
    prev = n;
  }
  return tiers;
}

bool tiers_strictly_nested(std::span<const ScopeTier> tiers) {
  for (std::size_t l = 1; l < tiers.size(); ++l) {
    const auto& inner = tiers[l - 1].observation_ids;
    const auto& outer = tiers[l].observation_ids;
    if (inner.size() >= outer.size()) return false;
    for (const auto& id : inner)
      if (std::find(outer.begin(), outer.end(), id) == outer.end()) return false;
  }
  return true;
}

double discounted_return(std::span<const double> utilities, double discount, int horizon) {
  if (utilities.empty()) throw Error(ErrorKind::EmptySequence, "discounted_return of no utilities");
  if (!(discount >= 0.0 && discount <= 1.0)) throw Error(ErrorKind::ConfigError, "discount must lie in [0,1]");
  if (horizon < 0) throw Error(ErrorKind::ConfigError, "horizon must be >= 0");
  const std::size_t last = std::min<std::size_t>(static_cast<std::size_t>(horizon), utilities.size() - 1);
  double total = 0.0;
  double weight = 1.0;
  for (std::size_t k = 0; k <= last; ++k) {
    total += weight * utilities[k];
    weight *= discount;
  }
  return total;
}

double utility_of_outcome(const Outcome& outcome) {
  if (outcome.ate) return 1.0;
  if (outcome.no_eat) return -1.0;
  return 0.0;
}

bool is_safe(std::span<const Outcome> history, int window) {
  if (window < 1) throw Error(ErrorKind::ConfigError, "safety window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  if (history.size() < w) return true;
  return std::any_of(history.end() - static_cast<long>(w), history.end(),
                     [](const Outcome& o) { return o.ate; });
}

}  // namespace qforma
