#include <catch2/catch_amalgamated.hpp>

#include "fauxpas/history.hpp"
#include "fauxpas/scenario.hpp"
#include "fauxpas/world.hpp"

#include "expected_values.hpp"

using namespace fauxpas;

namespace {

WorldModel tiny_world(std::vector<TransitionRule> rules) {
  WorldModel w;
  w.variables = {{"x", {"a", "b"}}};
  w.agents = {{0, "solo"}};
  w.actions = {{{"go", ActionKind::physical}}};
  w.action_priors = {{Dist<std::string>::point("go")}};
  w.initial_states = Dist<State>::point(State{{0}});
  w.rules = std::move(rules);
  return w;
}

TransitionRule identity_rule(std::string name) {
  return {std::move(name),
          [](const WorldModel&, const State&, const JointAction&) { return true; },
          [](const WorldModel&, const State& s, const JointAction&) {
            return Dist<std::pair<State, JointObservation>>::point(
                {s, JointObservation{{Observation{}}}});
          }};
}

}  // namespace

TEST_CASE("transition requires exactly one matching rule", "[world]") {
  auto never = identity_rule("never");
  never.guard = [](const WorldModel&, const State&, const JointAction&) { return false; };
  WorldModel none = tiny_world({never});
  CHECK_THROWS_AS(transition(none, State{{0}}, JointAction{{0}}), NoMatchingRuleError);

  WorldModel twice = tiny_world({identity_rule("first"), identity_rule("second")});
  CHECK_THROWS_AS(transition(twice, State{{0}}, JointAction{{0}}), SpecError);
}

TEST_CASE("world validation rejects structural defects", "[world]") {
  WorldModel w = tiny_world({identity_rule("step")});
  validate_world(w);

  WorldModel bad = w;
  bad.agents.push_back({2, "ghost"});
  CHECK_THROWS_AS(validate_world(bad), SpecError);

  bad = w;
  bad.variables[0].domain.clear();
  CHECK_THROWS_AS(validate_world(bad), SpecError);

  bad = w;
  bad.rules.clear();
  CHECK_THROWS_AS(validate_world(bad), SpecError);

  bad = w;
  bad.action_priors = {{Dist<std::string>::point("undeclared")}};
  CHECK_THROWS_AS(validate_world(bad), SpecError);
}

TEST_CASE("state helpers translate names and values", "[world]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  State s = w.make_state({{"ability", "low"},
                          {"perception", "good"},
                          {"modified", "no"},
                          {"speaker_location", "outside"}});
  CHECK(w.state_value(s, "ability") == "low");
  State t = w.with_value(s, "perception", "bad");
  CHECK(w.state_value(t, "perception") == "bad");
  CHECK(w.state_value(s, "perception") == "good");
  CHECK_THROWS_AS(w.make_state({{"ability", "high"}}), SpecError);
  CHECK_THROWS_AS(w.with_value(s, "perception", "purple"), SpecError);
}

TEST_CASE("enumeration counts for the default scenario", "[history]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);

  auto unscripted = enumerate_histories(w, spec.horizon);
  CHECK(unscripted.size() == expected::kUnscriptedCount);

  auto variant_prior =
      enumerate_histories(w, spec.horizon, belief_script(spec, w, HistoryVariant::diverging));
  CHECK(variant_prior.size() == expected::kVariantPriorCount);

  auto full =
      enumerate_histories(w, spec.horizon, script_variant(spec, w, HistoryVariant::diverging));
  CHECK(full.size() == expected::kFullyScriptedCount);
}

TEST_CASE("enumeration weights sum to one", "[history]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  for (const auto& script :
       {Script{}, belief_script(spec, w, HistoryVariant::shared),
        script_variant(spec, w, HistoryVariant::shared)}) {
    auto hists = enumerate_histories(w, spec.horizon, script);
    double total = 0.0;
    for (const auto& h : hists) total += h.weight;
    CHECK(total == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("scripted actions carry probability one", "[history]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  auto full =
      enumerate_histories(w, spec.horizon, script_variant(spec, w, HistoryVariant::shared));
  // With every action pinned, each weight is exactly its initial state mass.
  std::vector<double> weights;
  for (const auto& h : full) weights.push_back(h.weight);
  std::sort(weights.begin(), weights.end());
  REQUIRE(weights.size() == 4);
  CHECK(weights[0] == Catch::Approx(0.05).margin(1e-12));
  CHECK(weights[1] == Catch::Approx(0.05).margin(1e-12));
  CHECK(weights[2] == Catch::Approx(0.45).margin(1e-12));
  CHECK(weights[3] == Catch::Approx(0.45).margin(1e-12));
}

TEST_CASE("enumeration is deterministic", "[history]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  auto a = enumerate_histories(w, spec.horizon);
  auto b = enumerate_histories(w, spec.horizon);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i].weight == b[i].weight);
  }
}

TEST_CASE("horizon zero yields bare initial states", "[history]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  auto hists = enumerate_histories(w, 0);
  REQUIRE(hists.size() == 4);
  for (const auto& h : hists) {
    CHECK(h.horizon() == 0);
    CHECK(h.weight == w.initial_states.mass(h.initial_state()));
  }
}

TEST_CASE("explosion guard trips at the cap", "[history]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  try {
    enumerate_histories(w, spec.horizon, {}, 10);
    FAIL("expected ExplosionGuardError");
  } catch (const ExplosionGuardError& e) {
    CHECK(e.cap() == 10);
  }
}

TEST_CASE("observation projections follow presence", "[history]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  UtteranceSemantics sem = build_semantics(spec);
  std::size_t listener = w.agent_index(spec.listener_label);
  std::size_t speaker = w.agent_index(spec.speaker_label);

  History shared = realized_history(spec, w, sem, HistoryVariant::shared);
  History diverging = realized_history(spec, w, sem, HistoryVariant::diverging);

  // The listener always perceives its own step-0 modification.
  for (const auto& h : {shared, diverging}) {
    auto zl = observation_sequence(h, listener);
    const Percept* own = zl[0].find(Percept::Kind::action, spec.listener_label);
    REQUIRE(own != nullptr);
    CHECK(own->value == "modify");
    // The spoken utterance arrives at step 1.
    const Percept* heard = zl[1].find(Percept::Kind::action, spec.speaker_label);
    REQUIRE(heard != nullptr);
    CHECK(heard->value == spec.spoken_utterance);
  }

  // An early speaker watches the modification happen; a late one only sees
  // the result.
  auto zs_shared = observation_sequence(shared, speaker);
  auto zs_diverging = observation_sequence(diverging, speaker);
  CHECK(zs_shared[0].find(Percept::Kind::action, spec.listener_label) != nullptr);
  CHECK(zs_diverging[0].find(Percept::Kind::action, spec.listener_label) == nullptr);
  const Percept* sight = zs_diverging[0].find(Percept::Kind::variable, spec.perception_variable);
  REQUIRE(sight != nullptr);
  CHECK(sight->value == "bad");

  // The listener never perceives how the speaker entered.
  for (const auto& zl : {observation_sequence(shared, listener),
                         observation_sequence(diverging, listener)}) {
    const Percept* entry = zl[0].find(Percept::Kind::action, spec.speaker_label);
    CHECK(entry == nullptr);
  }
}
