#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qforma/cognition.hpp"
#include "qforma/error.hpp"

using namespace qforma;
using namespace qforma::cognition;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::ConfigError;
}

// Recursive include/exclude walk, written independently of the bitmask search.
struct BruteBest {
  bool found = false;
  double total = 0.0;
  std::vector<AgentId> subset;
};

void brute_walk(const std::vector<std::pair<AgentId, double>>& agents, std::size_t i, std::vector<AgentId>& cur,
                double partial, const CoordinationCost& coord, BruteBest& best) {
  if (i == agents.size()) {
    if (cur.empty()) return;
    const double total = partial + coord(cur);
    bool take = !best.found || total < best.total;
    if (!take && total == best.total) {
      if (cur.size() != best.subset.size())
        take = cur.size() < best.subset.size();
      else
        take = std::lexicographical_compare(cur.begin(), cur.end(), best.subset.begin(), best.subset.end());
    }
    if (take) best = {true, total, cur};
    return;
  }
  brute_walk(agents, i + 1, cur, partial, coord, best);
  cur.push_back(agents[i].first);
  brute_walk(agents, i + 1, cur, partial + agents[i].second, coord, best);
  cur.pop_back();
}

CooperationPlan brute_plan(double solo, const std::map<AgentId, double>& costs, const CoordinationCost& coord) {
  std::vector<std::pair<AgentId, double>> agents(costs.begin(), costs.end());
  std::vector<AgentId> cur;
  BruteBest best;
  brute_walk(agents, 0, cur, 0.0, coord, best);
  if (best.found && best.total < solo) return {CooperationPlan::Mode::Coop, best.subset, best.total};
  return {CooperationPlan::Mode::Solo, {}, solo};
}

MethodCandidate cand(double time, double cost) {
  MethodCandidate c;
  c.time = time;
  c.cost = cost;
  return c;
}

}  // namespace

TEST_SUITE("cognition") {
  TEST_CASE("detect_internal_anomaly") {
    const std::vector<double> x{3, 4};
    const std::vector<double> zero{0, 0};
    CHECK_FALSE(detect_internal_anomaly(x, x, 0.0));
    CHECK(detect_internal_anomaly(x, zero, 4.9));
    CHECK_FALSE(detect_internal_anomaly(x, zero, 5.0));
    const std::vector<double> three{0, 0, 0};
    CHECK(kind_of([&] { detect_internal_anomaly(x, three, 1.0); }) == ErrorKind::DimensionError);
  }

  TEST_CASE("temporal_diff") {
    CHECK(temporal_diff(30, 30) == 0.0);
    CHECK(temporal_diff(20, 30) == -10.0);
    CHECK(temporal_diff(-1, 1) == -2.0);
  }

  TEST_CASE("detect_abnormal") {
    CHECK(detect_abnormal(31, 25, 5));
    CHECK_FALSE(detect_abnormal(25, 25, 5));
    CHECK_FALSE(detect_abnormal(20, 25, 5));
    CHECK(kind_of([] { detect_abnormal(1, 0, 0); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { detect_abnormal(1, 0, -2); }) == ErrorKind::ConfigError);
  }

  TEST_CASE("detect_abnormal agrees with the vector detector on scalars") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::uniform_real_distribution<double> tol(0.01, 20.0);
    for (int i = 0; i < 2000; ++i) {
      const double e = u(gen);
      const double normal = u(gen);
      const double eps = tol(gen);
      const std::vector<double> x{e};
      const std::vector<double> n{normal};
      CHECK(detect_abnormal(e, normal, eps) == detect_internal_anomaly(x, n, eps));
    }
  }

  TEST_CASE("importance") {
    CHECK(importance({"t", 30, 25, 5}, 2) == doctest::Approx(2.0));
    CHECK(importance({"t", 25, 25, 5}, 3) == 0.0);
    CHECK(importance({"t", 99, 25, 5}, 0) == 0.0);
    CHECK(kind_of([] { importance({"t", 1, 0, 0}, 1); }) == ErrorKind::ConfigError);
  }

  TEST_CASE("screen_scope examples") {
    const auto tiers = nested_tiers({"a", "b"}, {1, 2});
    std::map<std::string, Observation> obs{{"a", {"a", 0.9, 0, 1}}, {"b", {"b", 0.8, 0, 1}}};

    auto r = screen_scope(tiers, obs, {}, 0.5);
    CHECK(r.tiers_evaluated == 1);
    REQUIRE(r.questions.size() == 1);
    CHECK(r.questions[0].payload == "a");
    CHECK(r.questions[0].kind == QuestionKind::EnvironmentChange);
    CHECK(r.questions[0].priority == doctest::Approx(0.9));

    obs["a"].value = 0.1;
    r = screen_scope(tiers, obs, {}, 0.5);
    CHECK(r.tiers_evaluated == 2);
    REQUIRE(r.questions.size() == 1);
    CHECK(r.questions[0].payload == "b");
    CHECK(r.questions[0].scope_tier == 1);

    obs["b"].value = 0.2;
    r = screen_scope(tiers, obs, {}, 0.5);
    CHECK(r.questions.empty());
    CHECK(r.tiers_evaluated == 2);

    r = screen_scope(tiers, obs, {{"b", 10.0}}, 0.5);
    REQUIRE(r.questions.size() == 1);
    CHECK(r.questions[0].priority == doctest::Approx(2.0));
  }

  TEST_CASE("screen_scope never emits at or below the threshold") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 1 + gen() % 6;
      std::vector<std::string> ids;
      std::map<std::string, Observation> obs;
      std::map<std::string, double> weights;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string id = "f" + std::to_string(i);
        ids.push_back(id);
        obs[id] = {id, u(gen), 0.0, 1.0};
        weights[id] = u(gen);
      }
      std::vector<std::size_t> sizes;
      for (std::size_t k = 1; k <= n; ++k) sizes.push_back(k);
      const auto tiers = nested_tiers(ids, sizes);
      REQUIRE(tiers_strictly_nested(tiers));
      const double threshold = u(gen);
      const auto r = screen_scope(tiers, obs, weights, threshold);
      for (const auto& q : r.questions) {
        CHECK(q.priority > threshold);
        CHECK(importance(obs[q.payload], weights[q.payload]) == doctest::Approx(q.priority));
      }
      // every tier before the stopping one had nothing above threshold
      for (std::size_t t = 0; t + 1 < r.tiers_evaluated; ++t)
        for (const auto& id : tiers[t].observation_ids) CHECK(importance(obs[id], weights[id]) <= threshold);
    }
  }

  TEST_CASE("cooperation_plan examples") {
    const std::map<AgentId, double> costs{{1, 4.0}, {2, 4.0}};
    auto plan = cooperation_plan(10.0, costs, [](std::span<const AgentId>) { return 1.0; });
    CHECK(plan == CooperationPlan{CooperationPlan::Mode::Coop, {1}, 5.0});

    plan = cooperation_plan(10.0, costs, [](std::span<const AgentId>) { return 100.0; });
    CHECK(plan == CooperationPlan{CooperationPlan::Mode::Solo, {}, 10.0});

    plan = cooperation_plan(7.5, {}, [](std::span<const AgentId>) { return 0.0; });
    CHECK(plan == CooperationPlan{CooperationPlan::Mode::Solo, {}, 7.5});

    // equal to solo is not strictly cheaper
    plan = cooperation_plan(5.0, costs, [](std::span<const AgentId>) { return 1.0; });
    CHECK(plan.mode == CooperationPlan::Mode::Solo);
  }

  TEST_CASE("cooperation_plan bound") {
    std::map<AgentId, double> twelve;
    for (AgentId i = 0; i < 12; ++i) twelve[i] = 1.0;
    CHECK_NOTHROW(cooperation_plan(1.0, twelve, [](std::span<const AgentId>) { return 0.0; }));
    twelve[12] = 1.0;
    CHECK(kind_of([&] { cooperation_plan(1.0, twelve, [](std::span<const AgentId>) { return 0.0; }); }) ==
          ErrorKind::TooManyAgents);
  }

  TEST_CASE("cooperation_plan matches a brute-force oracle") {
    std::mt19937_64 gen(314);
    std::uniform_int_distribution<int> small(0, 6);
    int mismatches = 0;
    for (int trial = 0; trial < 400; ++trial) {
      const std::size_t m = gen() % 11;
      std::map<AgentId, double> costs;
      while (costs.size() < m) costs[static_cast<AgentId>(gen() % 40)] = small(gen);  // integers force ties
      const double solo = small(gen) * 3.0;
      const double per_member = small(gen) * 0.5;
      const double flat = small(gen);
      CoordinationCost coord = [=](std::span<const AgentId> s) {
        return flat + per_member * static_cast<double>(s.size() * s.size());
      };
      if (cooperation_plan(solo, costs, coord) != brute_plan(solo, costs, coord)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("select_method") {
    const std::vector<MethodCandidate> cs{cand(2, 3), cand(3, 1)};
    CHECK(select_method(cs, 1, 1) == 1);
    CHECK(select_method(cs, 1, 0) == 0);
    const std::vector<MethodCandidate> same{cand(1, 1), cand(1, 1), cand(1, 1)};
    CHECK(select_method(same, 1, 1) == 0);
    CHECK(kind_of([] { select_method({}, 1, 1); }) == ErrorKind::NoCandidates);
  }

  TEST_CASE("select_method is invariant to joint positive rescaling") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<MethodCandidate> cs(1 + gen() % 8);
      for (auto& c : cs) c = cand(std::round(u(gen)), std::round(u(gen)));
      const double a = std::round(u(gen));
      const double b = std::round(u(gen));
      const auto base = select_method(cs, a, b);
      for (double c : {2.0, 4.0, 0.5, 0.25}) CHECK(select_method(cs, c * a, c * b) == base);
    }
  }

  TEST_CASE("friendly_filter") {
    MethodCandidate ok;
    ok.id = "ok";
    ok.env_impact = 1;
    ok.social_impact = 1;
    MethodCandidate bad = ok;
    bad.id = "bad";
    bad.env_impact = 2;
    const std::vector<MethodCandidate> cs{bad, ok};
    const auto kept = friendly_filter(cs, 2);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].id == "ok");
    CHECK(friendly_filter(cs, std::numeric_limits<double>::infinity()).size() == 2);
  }

  TEST_CASE("exploration_pick") {
    MethodCandidate a;
    a.info_gain = 1.0;
    a.risk = 0.5;
    CHECK(exploration_pick(std::vector{a}, 1) == 0);
    MethodCandidate b;
    b.info_gain = 1;
    MethodCandidate c;
    c.info_gain = 2;
    c.risk = 2;
    CHECK(exploration_pick(std::vector{b, c}, 1) == 0);
    CHECK(exploration_pick(std::vector{b, c}, 0) == 1);
    CHECK(kind_of([] { exploration_pick({}, 1); }) == ErrorKind::NoCandidates);
  }

  TEST_CASE("classify_indirect and long_horizon_trigger") {
    CHECK(classify_indirect(-1, 2) == Contribution::Indirect);
    CHECK(classify_indirect(1, 2) == Contribution::Direct);
    CHECK(classify_indirect(1, -1) == Contribution::Harmful);
    CHECK(classify_indirect(0, 0) == Contribution::Harmful);
    CHECK(long_horizon_trigger(0.1, 0.2));
    CHECK_FALSE(long_horizon_trigger(0.3, 0.2));
    CHECK_FALSE(long_horizon_trigger(0.2, 0.2));
  }

  TEST_CASE("belief_entropy") {
    CHECK(belief_entropy(BeliefState::uniform(2)) == doctest::Approx(1.0));
    CHECK(belief_entropy(BeliefState::point_mass(5, 2)) == 0.0);
    CHECK(belief_entropy(BeliefState::uniform(4)) == doctest::Approx(2.0));
    const std::vector<double> bad{0.5, 0.6};
    CHECK(kind_of([&] { belief_entropy(bad); }) == ErrorKind::NormalizationError);
  }

  TEST_CASE("belief_entropy bounds with the uniform maximum") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n = 2; n <= 8; ++n) {
      const double hmax = std::log2(static_cast<double>(n));
      CHECK(belief_entropy(BeliefState::uniform(n)) == doctest::Approx(hmax).epsilon(1e-12));
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& x : w) total += (x = u(gen) * (gen() % 3 == 0 ? 0.0 : 1.0));
        if (total == 0.0) continue;
        for (auto& x : w) x /= total;
        const double h = belief_entropy(w);
        CHECK(h >= 0.0);
        CHECK(h <= hmax + 1e-12);
      }
    }
  }

  TEST_CASE("pick_info_action") {
    const std::vector<InfoAction> acts{{"A", {{1.0, BeliefState::point_mass(2, 0)}}},
                                       {"B", {{1.0, BeliefState::uniform(2)}}}};
    CHECK(pick_info_action(acts) == "A");
    const std::vector<InfoAction> twins{{"X", {{0.5, BeliefState::uniform(2)}, {0.5, BeliefState::uniform(3)}}},
                                        {"Y", {{0.5, BeliefState::uniform(2)}, {0.5, BeliefState::uniform(3)}}}};
    CHECK(pick_info_action(twins) == "X");
    CHECK(pick_info_action(std::vector<InfoAction>{acts[1]}) == "B");
    CHECK(kind_of([] { pick_info_action({}); }) == ErrorKind::NoCandidates);
    const std::vector<InfoAction> leaky{{"L", {{0.7, BeliefState::uniform(2)}}}};
    CHECK(kind_of([&] { pick_info_action(leaky); }) == ErrorKind::NormalizationError);
  }

  TEST_CASE("check_decomposition") {
    std::set<std::pair<std::string, std::string>> cov{{"g1", "g"}, {"g2", "g"}};
    CHECK(check_decomposition("g", {"g1", "g2"}, cov).covered);
    CHECK_FALSE(check_decomposition("g", {"g1", "g3"}, cov).covered);
    CHECK_FALSE(check_decomposition("g", {}, cov).covered);
  }

  TEST_CASE("form_questions") {
    ThresholdConfig th;
    const std::vector<double> norm{0.0};
    ContextSnapshot ctx;
    ctx.internal.sensors = {0.0};

    // internal scope: only the information gap
    auto qs = form_questions(ctx, th, norm);
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].kind == QuestionKind::InformationGap);

    ctx.internal.sensors = {8.0};
    qs = form_questions(ctx, th, norm);
    REQUIRE(qs.size() == 2);
    CHECK(qs[0].kind == QuestionKind::InternalRisk);

    // scarce food, mostly regrowing, unhappy partner
    ctx.environment = EnvView{5, 55, {{"edible", 5, 60, 15}}};
    ctx.agents = AgentView{{{1, Mood::Unhappy}, {3, Mood::Happy}}, 1, {}};
    qs = form_questions(ctx, th, norm);
    std::vector<QuestionKind> kinds;
    for (const auto& q : qs) kinds.push_back(q.kind);
    CHECK(kinds == std::vector<QuestionKind>{QuestionKind::InternalRisk, QuestionKind::ResourceShortage,
                                             QuestionKind::SocialObligation, QuestionKind::MethodImprovement});

    // plentiful food: long horizon is the concern, partner happy
    ctx.internal.sensors = {0.0};
    ctx.environment = EnvView{50, 10, {{"edible", 50, 60, 15}}};
    ctx.agents->encountered = 3;
    qs = form_questions(ctx, th, norm);
    kinds.clear();
    for (const auto& q : qs) kinds.push_back(q.kind);
    CHECK(kinds == std::vector<QuestionKind>{QuestionKind::MethodImprovement, QuestionKind::LongHorizon});

    // nothing salient still yields one question
    ctx.environment = EnvView{0, 60, {}};
    qs = form_questions(ctx, th, norm);
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].kind == QuestionKind::InformationGap);
  }
}
