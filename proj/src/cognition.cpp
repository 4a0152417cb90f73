#include "qforma/cognition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qforma/error.hpp"

namespace qforma::cognition {

bool detect_internal_anomaly(std::span<const double> x, std::span<const double> x_norm, double delta) {
  if (x.size() != x_norm.size()) throw Error(ErrorKind::DimensionError, "sensor and norm vectors differ in length");
  if (!(delta >= 0.0)) throw Error(ErrorKind::ConfigError, "anomaly radius must be >= 0");
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - x_norm[i];
    sq += d * d;
  }
  return std::sqrt(sq) > delta;
}

bool detect_abnormal(double e, double normal, double tolerance) {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::ConfigError, "tolerance must be > 0");
  return std::abs(e - normal) > tolerance;
}

double importance(const Observation& e, double weight) {
  if (!(e.tolerance > 0.0)) throw Error(ErrorKind::ConfigError, "tolerance of '" + e.id + "' must be > 0");
  if (!(weight >= 0.0)) throw Error(ErrorKind::ConfigError, "importance weight must be >= 0");
  return weight * std::abs(e.value - e.normal) / e.tolerance;
}

ScreenResult screen_scope(std::span<const ScopeTier> tiers, const std::map<std::string, Observation>& observations,
                          const std::map<std::string, double>& weights, double threshold) {
  ScreenResult result;
  for (const auto& tier : tiers) {
    ++result.tiers_evaluated;
    for (const auto& id : tier.observation_ids) {
      auto obs = observations.find(id);
      if (obs == observations.end()) continue;
      auto w = weights.find(id);
      const double score = importance(obs->second, w == weights.end() ? 1.0 : w->second);
      if (score > threshold) result.questions.push_back({QuestionKind::EnvironmentChange, tier.tier, score, id});
    }
    if (!result.questions.empty()) break;
  }
  return result;
}

CooperationPlan cooperation_plan(double solo_cost, const std::map<AgentId, double>& per_agent_costs,
                                 const CoordinationCost& coord_cost) {
  const std::size_t m = per_agent_costs.size();
  if (m > kMaxCoalitionAgents)
    throw Error(ErrorKind::TooManyAgents, std::to_string(m) + " agents exceed the enumeration bound");
  if (!(solo_cost >= 0.0)) throw Error(ErrorKind::ConfigError, "solo cost must be >= 0");

  std::vector<AgentId> ids;
  std::vector<double> costs;
  for (const auto& [id, c] : per_agent_costs) {
    if (!(c >= 0.0)) throw Error(ErrorKind::ConfigError, "agent costs must be >= 0");
    ids.push_back(id);
    costs.push_back(c);
  }

  bool found = false;
  std::vector<AgentId> best_subset;
  double best_total = 0.0;
  std::vector<AgentId> subset;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    subset.clear();
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        subset.push_back(ids[i]);
        total += costs[i];
      }
    }
    total += coord_cost(subset);
    const bool better = !found || total < best_total ||
                        (total == best_total && (subset.size() < best_subset.size() ||
                                                 (subset.size() == best_subset.size() && subset < best_subset)));
    if (better) {
      found = true;
      best_total = total;
      best_subset = subset;
    }
  }

  if (found && best_total < solo_cost) return {CooperationPlan::Mode::Coop, best_subset, best_total};
  return {CooperationPlan::Mode::Solo, {}, solo_cost};
}

std::size_t select_method(std::span<const MethodCandidate> candidates, double time_weight, double cost_weight) {
  if (candidates.empty()) throw Error(ErrorKind::NoCandidates, "select_method over no candidates");
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double score = time_weight * candidates[i].time + cost_weight * candidates[i].cost;
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

std::vector<MethodCandidate> friendly_filter(std::span<const MethodCandidate> candidates, double impact_threshold) {
  std::vector<MethodCandidate> kept;
  std::copy_if(candidates.begin(), candidates.end(), std::back_inserter(kept), [&](const MethodCandidate& c) {
    return c.env_impact + c.social_impact <= impact_threshold;
  });
  return kept;
}

std::size_t exploration_pick(std::span<const MethodCandidate> candidates, double lambda) {
  if (candidates.empty()) throw Error(ErrorKind::NoCandidates, "exploration_pick over no candidates");
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double score = candidates[i].info_gain - lambda * candidates[i].risk;
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

std::string_view to_string(Contribution c) {
  switch (c) {
    case Contribution::Direct: return "direct";
    case Contribution::Indirect: return "indirect";
    case Contribution::Harmful: return "harmful";
  }
  return "harmful";
}

Contribution classify_indirect(double short_delta, double horizon_delta) {
  if (horizon_delta <= 0.0) return Contribution::Harmful;
  return short_delta < 0.0 ? Contribution::Indirect : Contribution::Direct;
}

double belief_entropy(const BeliefState& b) {
  double h = 0.0;
  for (double p : b.probs())
    if (p > 0.0) h -= p * std::log2(p);
  return std::max(h, 0.0);
}

double belief_entropy(std::span<const double> probs) {
  return belief_entropy(BeliefState({probs.begin(), probs.end()}));
}

std::string pick_info_action(std::span<const InfoAction> actions) {
  if (actions.empty()) throw Error(ErrorKind::NoCandidates, "pick_info_action over no actions");
  std::size_t best = 0;
  double best_h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    double mass = 0.0;
    double expected = 0.0;
    for (const auto& [prob, belief] : actions[i].predicted) {
      mass += prob;
      expected += prob * belief_entropy(belief);
    }
    if (std::abs(mass - 1.0) > BeliefState::kTolerance)
      throw Error(ErrorKind::NormalizationError, "outcome probabilities of '" + actions[i].id + "' do not sum to 1");
    if (expected < best_h) {
      best_h = expected;
      best = i;
    }
  }
  return actions[best].id;
}

DecompositionCheck check_decomposition(const std::string& goal, const std::vector<std::string>& subgoals,
                                       const std::set<std::pair<std::string, std::string>>& coverage) {
  const bool covered = !subgoals.empty() && std::all_of(subgoals.begin(), subgoals.end(), [&](const std::string& s) {
    return coverage.contains({s, goal});
  });
  return {goal, subgoals, covered};
}

std::vector<Question> form_questions(const ContextSnapshot& ctx, const ThresholdConfig& thresholds,
                                     std::span<const double> sensor_norm) {
  std::vector<Question> out;

  if (detect_internal_anomaly(ctx.internal.sensors, sensor_norm, thresholds.anomaly_delta)) {
    double dev = 0.0;
    for (std::size_t i = 0; i < sensor_norm.size(); ++i) dev += std::abs(ctx.internal.sensors[i] - sensor_norm[i]);
    out.push_back({QuestionKind::InternalRisk, 0, dev, "internal state off nominal"});
  }

  if (ctx.environment) {
    const auto& env = *ctx.environment;
    std::map<std::string, Observation> obs;
    std::vector<std::string> ids;
    for (const auto& o : env.per_factor) {
      obs.emplace(o.id, o);
      ids.push_back(o.id);
    }
    std::vector<std::size_t> sizes;
    for (std::size_t n = 1; n <= ids.size(); ++n) sizes.push_back(n);
    const auto tiers = nested_tiers(ids, sizes);
    for (auto q : screen_scope(tiers, obs, {}, thresholds.importance_threshold).questions) {
      const auto& o = obs.at(q.payload);
      if (o.id == "edible" && o.value < o.normal) q.kind = QuestionKind::ResourceShortage;
      q.scope_tier += 1;
      out.push_back(std::move(q));
    }

    if (env.edible_count > 0) out.push_back({QuestionKind::MethodImprovement, 1, 0.0, "how to eat sustainably"});

    const int total = env.edible_count + env.regrowing_count;
    const double risk = total == 0 ? 1.0 : static_cast<double>(env.regrowing_count) / total;
    if (long_horizon_trigger(risk, thresholds.safety_margin))
      out.push_back({QuestionKind::LongHorizon, 1, thresholds.safety_margin - risk, "invest in future supply"});
  }

  if (ctx.agents && ctx.agents->encountered) {
    const AgentId met = *ctx.agents->encountered;
    for (const auto& other : ctx.agents->others) {
      if (other.id == met && other.mood == Mood::Unhappy) {
        out.push_back({QuestionKind::SocialObligation, 2, 1.0, "encountered agent is unhappy"});
        break;
      }
    }
  }

  if (!ctx.environment || !ctx.agents)
    out.push_back({QuestionKind::InformationGap, 0, 0.0, "context outside scope"});

  std::stable_sort(out.begin(), out.end(), [](const Question& a, const Question& b) { return a.kind < b.kind; });
  if (out.empty()) out.push_back({QuestionKind::InformationGap, 0, 0.0, "nothing salient"});
  return out;
}

}  // namespace qforma::cognition
