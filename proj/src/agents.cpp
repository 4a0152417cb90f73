#include "qforma/agents.hpp"

#include <string>
#include <utility>

#include "qforma/error.hpp"

namespace qforma::agents {

Population::Population(int agent_count, int hours_between_meals) {
  if (agent_count < 1) throw Error(ErrorKind::ConfigError, "agent_count must be >= 1");
  agents.reserve(static_cast<std::size_t>(agent_count));
  for (AgentId id = 0; id < agent_count; ++id) {
    AgentState a;
    a.id = id;
    a.hours_since_meal = hours_between_meals;
    agents.push_back(std::move(a));
  }
}

const AgentState& Population::at(AgentId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= agents.size())
    throw Error(ErrorKind::ConfigError, "unknown agent " + std::to_string(id));
  return agents[static_cast<std::size_t>(id)];
}

AgentState& Population::at(AgentId id) {
  return const_cast<AgentState&>(std::as_const(*this).at(id));
}

void Population::start_day() {
  for (auto& a : agents) a.meals_today = 0;
  log.clear();
  greetings_today = 0;
}

void Population::start_feeding_event(AgentId id) { at(id).greeted_this_event = false; }

std::vector<FeedingEvent> feeding_schedule(int /*day*/, int agent_count, int feedings_per_day) {
  if (agent_count < 1 || feedings_per_day < 1)
    throw Error(ErrorKind::ConfigError, "agent_count and feedings_per_day must be >= 1");
  std::vector<FeedingEvent> order;
  order.reserve(static_cast<std::size_t>(agent_count) * static_cast<std::size_t>(feedings_per_day));
  for (int slot = 0; slot < feedings_per_day; ++slot)
    for (AgentId id = 0; id < agent_count; ++id) order.push_back({slot, id});
  return order;
}

void sample_moods(Population& pop, double p_unhappy, Rng& rng) {
  if (!(p_unhappy >= 0.0 && p_unhappy <= 1.0))
    throw Error(ErrorKind::ConfigError, "p_unhappy must lie in [0,1]");
  for (auto& a : pop.agents) a.mood = rng.uniform01() < p_unhappy ? Mood::Unhappy : Mood::Happy;
}

AgentId encounter(AgentId actor, const Population& pop, Rng& rng) {
  const auto n = pop.size();
  if (n < 2) throw Error(ErrorKind::NoPeers, "encounter needs at least two agents");
  auto pick = static_cast<AgentId>(rng.uniform_index(n - 1));
  return pick >= actor ? pick + 1 : pick;
}

void greet(Population& pop, AgentId actor, AgentId target, int day, int slot) {
  if (actor == target) throw Error(ErrorKind::SelfGreeting, "agent " + std::to_string(actor) + " greeted itself");
  pop.at(target);  // validates id
  pop.at(actor).greeted_this_event = true;
  pop.log.push_back({day, slot, actor, target, InteractionKind::Greet});
  ++pop.greetings_today;
}

}  // namespace qforma::agents
