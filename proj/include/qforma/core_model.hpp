#pragma once

// Domain vocabulary shared by every stage of the context -> question -> task pipeline.

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qforma {

using AgentId = int;

enum class Mood { Happy, Unhappy };

/// Prompting scope. The integer value is the method number minus one.
enum class Scope { Internal = 0, EnvironmentAware = 1, InterAgentAware = 2 };

Scope scope_from_method(int method);
int method_number(Scope scope);
std::string_view to_string(Mood mood);
std::string_view to_string(Scope scope);
std::optional<Scope> scope_from_string(std::string_view name);

inline bool includes_environment(Scope s) { return s != Scope::Internal; }
inline bool includes_agents(Scope s) { return s == Scope::InterAgentAware; }

struct InternalSensors {
  bool hungry = false;
  int hours_since_meal = 0;
  std::vector<double> sensors;
};

struct Observation {
  std::string id;
  double value = 0.0;
  double normal = 0.0;
  double tolerance = 1.0;
};

struct EnvView {
  int edible_count = 0;
  int regrowing_count = 0;
  std::vector<Observation> per_factor;
};

struct FeedbackMessage {
  AgentId from = 0;
  AgentId to = 0;
  double valence = 0.0;  // [-1, 1]
  std::string note;
};

struct AgentMood {
  AgentId id = 0;
  Mood mood = Mood::Happy;
};

struct AgentView {
  std::vector<AgentMood> others;  // excludes self
  std::optional<AgentId> encountered;
  std::vector<FeedbackMessage> feedback;
};

/// C_t = (internal, environment, agents), filtered by the prompting scope.
struct ContextSnapshot {
  int day = 1;
  int slot = 0;
  InternalSensors internal;
  std::optional<EnvView> environment;
  std::optional<AgentView> agents;

  /// True when the optional views present match exactly what `scope` exposes.
  bool matches_scope(Scope scope) const;
};

enum class QuestionKind {
  InternalRisk,
  ResourceShortage,
  EnvironmentChange,
  SocialObligation,
  MethodImprovement,
  LongHorizon,
  InformationGap,
};

inline constexpr QuestionKind kAllQuestionKinds[] = {
    QuestionKind::InternalRisk,     QuestionKind::ResourceShortage, QuestionKind::EnvironmentChange,
    QuestionKind::SocialObligation, QuestionKind::MethodImprovement, QuestionKind::LongHorizon,
    QuestionKind::InformationGap,
};

std::string_view to_string(QuestionKind kind);
std::optional<QuestionKind> question_kind_from_string(std::string_view name);

struct Question {
  QuestionKind kind = QuestionKind::InformationGap;
  int scope_tier = 0;
  double priority = 0.0;
  std::string payload;
};

namespace action {
struct Eat {
  bool operator==(const Eat&) const = default;
};
struct Water {
  bool operator==(const Water&) const = default;
};
struct Greet {
  AgentId target = 0;
  bool operator==(const Greet&) const = default;
};
struct Idle {
  bool operator==(const Idle&) const = default;
};
struct QueryEnvironment {
  bool operator==(const QueryEnvironment&) const = default;
};
struct QueryAgents {
  bool operator==(const QueryAgents&) const = default;
};
}  // namespace action

using TaskAction = std::variant<action::Eat, action::Water, action::Greet, action::Idle,
                                action::QueryEnvironment, action::QueryAgents>;

/// Wire name of the action type ("eat", "water", "greet", ...).
std::string_view action_name(const TaskAction& a);

struct Outcome {
  bool ate = false;
  bool watered = false;
  bool greeted = false;
  bool no_eat = false;
  double utility = 0.0;
};

enum class ScarcityBucket { Unknown, Low, Medium, High };

/// Edible count < 15 is Low, 15..30 Medium, > 30 High.
ScarcityBucket scarcity_bucket(std::optional<int> edible_count);
std::string_view to_string(ScarcityBucket b);

struct ContextSig {
  Scope scope = Scope::Internal;
  bool hungry = false;
  ScarcityBucket scarcity = ScarcityBucket::Unknown;
  bool any_unhappy = false;

  auto operator<=>(const ContextSig&) const = default;
};

ContextSig signature_of(const ContextSnapshot& ctx, Scope scope);
std::string to_string(const ContextSig& sig);

struct ExperienceTuple {
  ContextSig context_sig;
  QuestionKind question_kind = QuestionKind::InformationGap;
  std::vector<TaskAction> actions;
  Outcome outcome;
  double utility = 0.0;
};

struct GoalSpec {
  double discount = 1.0;
  int horizon = 0;
  std::vector<double> weights;
};

struct ThresholdConfig {
  double anomaly_delta = 0.0;                        // internal anomaly radius
  std::map<std::string, double> factor_tolerance;    // per-factor abnormality tolerance
  double default_tolerance = 15.0;                   // used when a factor has no entry
  double safety_margin = 0.5;                        // long-horizon trigger
  double impact_threshold = 2.0;                     // friendly filter
  double exploration_lambda = 1.0;                   // info gain vs risk
  double time_weight = 1.0;                          // method selection
  double cost_weight = 1.0;
  double importance_threshold = 1.0;                 // scope screening

  double tolerance_for(const std::string& factor) const;
  /// Throws ConfigError when any tolerance or weight is out of range.
  void validate() const;
};

struct MethodCandidate {
  std::string id;
  double time = 0.0;
  double cost = 0.0;
  double env_impact = 0.0;
  double social_impact = 0.0;
  double info_gain = 0.0;
  double risk = 0.0;
};

/// Discrete probability vector; construction enforces normalization.
class BeliefState {
 public:
  static constexpr double kTolerance = 1e-9;

  explicit BeliefState(std::vector<double> probs);
  static BeliefState uniform(std::size_t n);
  static BeliefState point_mass(std::size_t n, std::size_t at);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

struct ScopeTier {
  int tier = 0;
  std::vector<std::string> observation_ids;
};

/// Builds tiers where tier l holds the first cumulative_sizes[l] ids, so nesting holds by construction.
std::vector<ScopeTier> nested_tiers(const std::vector<std::string>& ordered_ids,
                                    const std::vector<std::size_t>& cumulative_sizes);
bool tiers_strictly_nested(std::span<const ScopeTier> tiers);

/// Sum over k = 0..min(horizon, n-1) of discount^k * utilities[k].
double discounted_return(std::span<const double> utilities, double discount, int horizon);

/// +1 for a meal, -1 for a no-eat event, 0 otherwise.
double utility_of_outcome(const Outcome& outcome);

/// Safe unless the last `window` feeding outcomes all lacked a meal.
bool is_safe(std::span<const Outcome> history, int window = 3);

}  // namespace qforma
