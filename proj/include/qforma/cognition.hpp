#pragma once

// Question-formation mathematics: anomaly detection, importance screening over nested
// observation scopes, cooperation planning, method selection and exploration scoring.

#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qforma/core_model.hpp"

namespace qforma::cognition {

/// True iff the Euclidean distance between `x` and `x_norm` exceeds `delta`.
bool detect_internal_anomaly(std::span<const double> x, std::span<const double> x_norm, double delta);

inline double temporal_diff(double e_now, double e_prev) { return e_now - e_prev; }

/// True iff |e - normal| > tolerance. Tolerance must be positive.
bool detect_abnormal(double e, double normal, double tolerance);

/// weight * |value - normal| / tolerance.
double importance(const Observation& e, double weight);

struct ScreenResult {
  std::vector<Question> questions;
  std::size_t tiers_evaluated = 0;
};

/// Layered screening. Tiers are scored innermost first; the first tier with any
/// observation scoring above `threshold` yields one EnvironmentChange question per such
/// observation and stops the escalation. Observations missing from `observations` are skipped;
/// missing weights default to 1.
ScreenResult screen_scope(std::span<const ScopeTier> tiers, const std::map<std::string, Observation>& observations,
                          const std::map<std::string, double>& weights, double threshold);

struct CooperationPlan {
  enum class Mode { Solo, Coop };
  Mode mode = Mode::Solo;
  std::vector<AgentId> subset;  // sorted ascending; empty for Solo
  double total_cost = 0.0;

  bool operator==(const CooperationPlan&) const = default;
};

inline constexpr std::size_t kMaxCoalitionAgents = 12;

using CoordinationCost = std::function<double(std::span<const AgentId>)>;

/// Exhaustive coalition search. A coalition costs the sum of its members' costs plus
/// `coord_cost(subset)`; it is chosen only when strictly cheaper than going alone.
/// Equal totals prefer the smaller, then lexicographically smaller, subset.
CooperationPlan cooperation_plan(double solo_cost, const std::map<AgentId, double>& per_agent_costs,
                                 const CoordinationCost& coord_cost);

/// argmin of time_weight * time + cost_weight * cost; earliest index wins ties.
std::size_t select_method(std::span<const MethodCandidate> candidates, double time_weight, double cost_weight);

/// Keeps candidates whose env_impact + social_impact <= impact_threshold, in order.
std::vector<MethodCandidate> friendly_filter(std::span<const MethodCandidate> candidates, double impact_threshold);

/// argmax of info_gain - lambda * risk; earliest index wins ties.
std::size_t exploration_pick(std::span<const MethodCandidate> candidates, double lambda);

enum class Contribution { Direct, Indirect, Harmful };
std::string_view to_string(Contribution c);

Contribution classify_indirect(double short_delta, double horizon_delta);

inline bool long_horizon_trigger(double risk, double safety_margin) { return risk < safety_margin; }

/// Shannon entropy in bits.
double belief_entropy(const BeliefState& b);

/// Raw-vector overload; throws NormalizationError if the vector is not a distribution.
double belief_entropy(std::span<const double> probs);

struct InfoAction {
  std::string id;
  std::vector<std::pair<double, BeliefState>> predicted;  // (probability, posterior)
};

/// Action with the least expected posterior entropy; earliest wins ties.
std::string pick_info_action(std::span<const InfoAction> actions);

struct DecompositionCheck {
  std::string goal_id;
  std::vector<std::string> subgoal_ids;
  bool covered = false;
};

DecompositionCheck check_decomposition(const std::string& goal, const std::vector<std::string>& subgoals,
                                       const std::set<std::pair<std::string, std::string>>& coverage);

/// Candidate questions for one feeding event, ordered by kind. Never empty.
///
/// `sensor_norm` is the nominal value of `ctx.internal.sensors`. Environmental factors are
/// screened in the order they appear in `EnvView::per_factor`, one tier per factor.
std::vector<Question> form_questions(const ContextSnapshot& ctx, const ThresholdConfig& thresholds,
                                     std::span<const double> sensor_norm);

}  // namespace qforma::cognition
