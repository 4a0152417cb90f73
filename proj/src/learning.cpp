#include "qforma/learning.hpp"

#include <algorithm>

#include "qforma/error.hpp"

namespace qforma::learning {

void Memory::record(ExperienceTuple tuple) {
  auto& s = stats_[{tuple.context_sig, tuple.question_kind}];
  ++s.count;
  s.mean_utility += (tuple.utility - s.mean_utility) / s.count;
  tuples_.push_back(std::move(tuple));
}

double Memory::mean_utility(const ContextSig& sig, QuestionKind kind) const {
  auto it = stats_.find({sig, kind});
  return it == stats_.end() ? 0.0 : it->second.mean_utility;
}

QuestionKind select_question(const Memory& memory, const ContextSig& sig, std::span<const QuestionKind> candidates,
                             double epsilon, Rng& rng) {
  if (candidates.empty()) throw Error(ErrorKind::NoCandidates, "select_question over no candidates");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorKind::ConfigError, "epsilon must lie in [0,1]");
  if (rng.uniform01() < epsilon) return candidates[rng.uniform_index(candidates.size())];
  std::size_t best = 0;
  double best_mean = memory.mean_utility(sig, candidates[0]);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double m = memory.mean_utility(sig, candidates[i]);
    if (m > best_mean) {
      best_mean = m;
      best = i;
    }
  }
  return candidates[best];
}

std::map<ContextSig, std::vector<QuestionKind>> question_policy_snapshot(const Memory& memory) {
  std::map<ContextSig, std::vector<std::pair<QuestionKind, double>>> grouped;
  for (const auto& [key, s] : memory.stats()) grouped[key.first].emplace_back(key.second, s.mean_utility);

  std::map<ContextSig, std::vector<QuestionKind>> out;
  for (auto& [sig, kinds] : grouped) {
    // map order already lists kinds ascending, so a stable sort keeps kind order on ties
    std::stable_sort(kinds.begin(), kinds.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    auto& ranked = out[sig];
    for (const auto& k : kinds) ranked.push_back(k.first);
  }
  return out;
}

Json to_json(const ContextSig& sig) {
  return {{"scope", to_string(sig.scope)},
          {"hungry", sig.hungry},
          {"scarcity", to_string(sig.scarcity)},
          {"any_unhappy", sig.any_unhappy}};
}

Json to_json(const TaskAction& a) {
  Json j{{"type", action_name(a)}};
  if (const auto* g = std::get_if<action::Greet>(&a)) j["target"] = g->target;
  return j;
}

Json to_json(const Outcome& o) {
  return {{"ate", o.ate}, {"watered", o.watered}, {"greeted", o.greeted}, {"no_eat", o.no_eat}, {"utility", o.utility}};
}

namespace {

ContextSig sig_from_json(const Json& j) {
  ContextSig sig;
  auto scope = scope_from_string(j.at("scope").get<std::string>());
  if (!scope) throw Error(ErrorKind::ConfigError, "unknown scope in memory file");
  sig.scope = *scope;
  sig.hungry = j.at("hungry").get<bool>();
  const auto scarcity = j.at("scarcity").get<std::string>();
  for (auto b : {ScarcityBucket::Unknown, ScarcityBucket::Low, ScarcityBucket::Medium, ScarcityBucket::High})
    if (to_string(b) == scarcity) sig.scarcity = b;
  sig.any_unhappy = j.at("any_unhappy").get<bool>();
  return sig;
}

TaskAction action_from_json(const Json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "eat") return action::Eat{};
  if (type == "water") return action::Water{};
  if (type == "greet") return action::Greet{j.at("target").get<AgentId>()};
  if (type == "idle") return action::Idle{};
  if (type == "query_environment") return action::QueryEnvironment{};
  if (type == "query_agents") return action::QueryAgents{};
  throw Error(ErrorKind::ConfigError, "unknown action '" + type + "' in memory file");
}

}  // namespace

Json to_json(const Memory& memory) {
  Json tuples = Json::array();
  for (const auto& t : memory.tuples()) {
    Json actions = Json::array();
    for (const auto& a : t.actions) actions.push_back(to_json(a));
    tuples.push_back({{"context_sig", to_json(t.context_sig)},
                      {"question_kind", to_string(t.question_kind)},
                      {"actions", std::move(actions)},
                      {"outcome", to_json(t.outcome)},
                      {"utility", t.utility}});
  }
  Json stats = Json::array();
  for (const auto& [key, s] : memory.stats()) {
    stats.push_back({{"context_sig", to_json(key.first)},
                     {"question_kind", to_string(key.second)},
                     {"count", s.count},
                     {"mean_utility", s.mean_utility}});
  }
  Json policy = Json::array();
  for (const auto& [sig, kinds] : question_policy_snapshot(memory)) {
    Json ranked = Json::array();
    for (auto k : kinds) ranked.push_back(to_string(k));
    policy.push_back({{"context_sig", to_json(sig)}, {"ranked", std::move(ranked)}});
  }
  return {{"tuples", std::move(tuples)}, {"stats", std::move(stats)}, {"policy", std::move(policy)}};
}

Memory memory_from_json(const Json& j) {
  Memory m;
  try {
    for (const auto& t : j.at("tuples")) {
      ExperienceTuple tuple;
      tuple.context_sig = sig_from_json(t.at("context_sig"));
      auto kind = question_kind_from_string(t.at("question_kind").get<std::string>());
      if (!kind) throw Error(ErrorKind::ConfigError, "unknown question kind in memory file");
      tuple.question_kind = *kind;
      for (const auto& a : t.at("actions")) tuple.actions.push_back(action_from_json(a));
      const auto& o = t.at("outcome");
      tuple.outcome = {o.at("ate").get<bool>(), o.at("watered").get<bool>(), o.at("greeted").get<bool>(),
                       o.at("no_eat").get<bool>(), o.at("utility").get<double>()};
      tuple.utility = t.at("utility").get<double>();
      m.record(std::move(tuple));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed memory file: ") + e.what());
  }
  return m;
}

}  // namespace qforma::learning
