#pragma once

#include <vector>

#include "qforma/core_model.hpp"
#include "qforma/rng.hpp"

namespace qforma::agents {

struct AgentState {
  AgentId id = 0;
  Mood mood = Mood::Happy;
  bool greeted_this_event = false;
  int meals_today = 0;
  int no_eat_total = 0;
  int hours_since_meal = 0;
  std::vector<Outcome> history;
};

enum class InteractionKind { Encounter, Greet };

struct InteractionEvent {
  int day = 1;
  int slot = 0;
  AgentId actor = 0;
  AgentId target = 0;
  InteractionKind kind = InteractionKind::Encounter;
};

struct FeedingEvent {
  int slot = 0;
  AgentId agent = 0;
  bool operator==(const FeedingEvent&) const = default;
};

/// The population plus the per-day interaction log.
struct Population {
  std::vector<AgentState> agents;
  std::vector<InteractionEvent> log;
  int greetings_today = 0;

  explicit Population(int agent_count, int hours_between_meals = 8);
  std::size_t size() const { return agents.size(); }
  AgentState& at(AgentId id);
  const AgentState& at(AgentId id) const;

  /// Clears per-day counters and the interaction log.
  void start_day();
  void start_feeding_event(AgentId id);
};

/// Slot-major order; agents ascend within a slot. `day` does not change the order.
std::vector<FeedingEvent> feeding_schedule(int day, int agent_count, int feedings_per_day);

/// One uniform draw per agent, ascending id; unhappy iff draw < p_unhappy.
void sample_moods(Population& pop, double p_unhappy, Rng& rng);

/// A uniformly random peer of `actor` (one draw).
AgentId encounter(AgentId actor, const Population& pop, Rng& rng);

/// Watering is withheld only when the encountered agent is unhappy and was not greeted.
constexpr bool watering_permitted(Mood encountered_mood, bool greeted) {
  return !(encountered_mood == Mood::Unhappy && !greeted);
}

void greet(Population& pop, AgentId actor, AgentId target, int day, int slot);

}  // namespace qforma::agents
