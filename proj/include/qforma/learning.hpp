#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qforma/core_model.hpp"
#include "qforma/json.hpp"
#include "qforma/rng.hpp"

namespace qforma::learning {

struct KindStats {
  int count = 0;
  double mean_utility = 0.0;
};

using StatsKey = std::pair<ContextSig, QuestionKind>;

/// Append-only experience store with incremental per-(signature, question kind) means.
class Memory {
 public:
  void record(ExperienceTuple tuple);

  const std::vector<ExperienceTuple>& tuples() const { return tuples_; }
  const std::map<StatsKey, KindStats>& stats() const { return stats_; }
  /// Mean utility, or 0 for a pair never observed.
  double mean_utility(const ContextSig& sig, QuestionKind kind) const;

 private:
  std::vector<ExperienceTuple> tuples_;
  std::map<StatsKey, KindStats> stats_;
};

inline void record_experience(Memory& memory, ExperienceTuple tuple) { memory.record(std::move(tuple)); }

/// Epsilon-greedy choice. Always consumes one uniform draw for the explore test, plus one
/// index draw when exploring. Exploitation takes the best mean, earliest candidate on ties.
QuestionKind select_question(const Memory& memory, const ContextSig& sig, std::span<const QuestionKind> candidates,
                             double epsilon, Rng& rng);

/// Per signature: observed kinds by mean utility descending, ties by kind order.
std::map<ContextSig, std::vector<QuestionKind>> question_policy_snapshot(const Memory& memory);

Json to_json(const Memory& memory);
/// Rebuilds a memory by replaying the stored tuples.
Memory memory_from_json(const Json& j);

Json to_json(const ContextSig& sig);
Json to_json(const TaskAction& a);
Json to_json(const Outcome& o);

}  // namespace qforma::learning
