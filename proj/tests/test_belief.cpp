#include <catch2/catch_amalgamated.hpp>

#include "fauxpas/belief.hpp"
#include "fauxpas/scenario.hpp"

#include "expected_values.hpp"

using namespace fauxpas;

namespace {

struct VariantSetup {
  WorldModel w;
  UtteranceSemantics sem;
  BeliefState prior;
  History realized;
  std::size_t listener;
  std::size_t speaker;
};

VariantSetup setup(HistoryVariant v) {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  UtteranceSemantics sem = build_semantics(spec);
  std::size_t listener = w.agent_index(spec.listener_label);
  std::size_t speaker = w.agent_index(spec.speaker_label);
  BeliefState prior = prior_belief(w, listener, spec.horizon, belief_script(spec, w, v));
  History realized = realized_history(spec, w, sem, v);
  return {std::move(w), std::move(sem), std::move(prior), std::move(realized), listener, speaker};
}

/// Both agents see the coin and every action; nothing is private.
WorldModel observable_world() {
  WorldModel w;
  w.variables = {{"coin", {"heads", "tails"}}};
  w.agents = {{0, "A"}, {1, "B"}};
  w.actions = {{{"a1", ActionKind::physical}, {"a2", ActionKind::physical}},
               {{"b1", ActionKind::physical}}};
  w.action_priors = {
      {Dist<std::string>::from_weights({{"a1", 0.5}, {"a2", 0.5}})},
      {Dist<std::string>::point("b1")},
  };
  w.initial_states =
      Dist<State>::from_weights({{State{{0}}, 0.5}, {State{{1}}, 0.5}});
  w.rules = {{"public step",
              [](const WorldModel&, const State&, const JointAction&) { return true; },
              [](const WorldModel& world, const State& s, const JointAction& a) {
                Observation everything = Observation::of({
                    {Percept::Kind::action, "A", world.action_name(0, a.actions[0])},
                    {Percept::Kind::action, "B", world.action_name(1, a.actions[1])},
                    {Percept::Kind::variable, "coin", world.state_value(s, "coin")},
                });
                return Dist<std::pair<State, JointObservation>>::point(
                    {s, JointObservation{{everything, everything}}});
              }}};
  validate_world(w);
  return w;
}

}  // namespace

TEST_CASE("unconditioned marginals match the generative constants", "[belief]") {
  ScenarioSpec spec;
  WorldModel w = build_world(spec);
  for (auto v : {HistoryVariant::shared, HistoryVariant::diverging}) {
    BeliefState prior = prior_belief(w, 0, spec.horizon, belief_script(spec, w, v));
    CHECK(marginal(w, prior, state_value_at(spec.ability_variable, 0)).mass("high") ==
          Catch::Approx(expected::kAbilityHighPrior).margin(expected::kTol));
    CHECK(marginal(w, prior, state_value_at(spec.perception_variable, 0)).mass("good") ==
          Catch::Approx(expected::kPerceptionGoodPrior).margin(expected::kTol));
    CHECK(marginal(w, prior, action_taken(spec.listener_label, 0, "modify")).mass("yes") ==
          Catch::Approx(expected::kModifyPrior).margin(expected::kTol));
  }
}

TEST_CASE("listener belief shifts from the heard utterance", "[belief]") {
  for (auto v : {HistoryVariant::shared, HistoryVariant::diverging}) {
    auto s = setup(v);
    auto zl = observation_sequence(s.realized, s.listener);
    BeliefState before = condition(s.w, s.prior, {zl[0]}, &s.sem);
    BeliefState after = condition(s.w, before, {zl[1]}, &s.sem);
    CHECK(before.conditioned_on.size() == 1);
    CHECK(after.conditioned_on.size() == 2);
    CHECK(marginal(s.w, before, state_value_at("ability")).mass("high") ==
          Catch::Approx(expected::kBeforeAbilityHigh).margin(expected::kTol));
    CHECK(marginal(s.w, after, state_value_at("ability")).mass("high") ==
          Catch::Approx(expected::kAfterAbilityHigh).margin(expected::kTol));
  }
}

TEST_CASE("single utterance shifts odds by exactly the epsilon factor", "[belief]") {
  auto s = setup(HistoryVariant::diverging);
  auto zl = observation_sequence(s.realized, s.listener);
  BeliefState before = condition(s.w, s.prior, {zl[0]}, &s.sem);
  BeliefState after = condition(s.w, before, {zl[1]}, &s.sem);
  auto q = state_value_at("perception");
  double prior_odds =
      marginal(s.w, before, q).mass("bad") / marginal(s.w, before, q).mass("good");
  double post_odds = marginal(s.w, after, q).mass("bad") / marginal(s.w, after, q).mass("good");
  CHECK(post_odds / prior_odds ==
        Catch::Approx(expected::kEpsilonOddsFactor).margin(expected::kTol));
}

TEST_CASE("impossible evidence is a hard error", "[belief]") {
  auto s = setup(HistoryVariant::shared);
  Observation impossible =
      Observation::of({{Percept::Kind::variable, "modified", "yes"}});
  CHECK_THROWS_AS(condition(s.w, s.prior, {impossible}), ZeroPosteriorError);
}

TEST_CASE("conditioning beyond the horizon is rejected", "[belief]") {
  auto s = setup(HistoryVariant::shared);
  auto zl = observation_sequence(s.realized, s.listener);
  std::vector<Observation> three = {zl[0], zl[1], zl[1]};
  CHECK_THROWS_AS(condition(s.w, s.prior, three, &s.sem), SpecError);
}

TEST_CASE("sequential equals batch conditioning", "[belief]") {
  for (auto v : {HistoryVariant::shared, HistoryVariant::diverging}) {
    auto s = setup(v);
    for (std::size_t agent : {s.listener, s.speaker}) {
      auto z = observation_sequence(s.realized, agent);
      BeliefState owner_prior = reowned(s.prior, agent);
      BeliefState seq = condition(s.w, condition(s.w, owner_prior, {z[0]}, &s.sem), {z[1]}, &s.sem);
      BeliefState batch = condition(s.w, owner_prior, {z[0], z[1]}, &s.sem);
      REQUIRE(seq.dist.size() == batch.dist.size());
      for (std::size_t i = 0; i < seq.dist.size(); ++i) {
        CHECK(seq.dist.support()[i].first == batch.dist.support()[i].first);
        CHECK(seq.dist.support()[i].second ==
              Catch::Approx(batch.dist.support()[i].second).margin(1e-12));
      }
    }
  }
}

TEST_CASE("posterior support never leaves the prior support", "[belief]") {
  auto s = setup(HistoryVariant::diverging);
  auto zl = observation_sequence(s.realized, s.listener);
  BeliefState post = condition(s.w, s.prior, {zl[0], zl[1]}, &s.sem);
  for (const auto& [h, m] : post.dist.support()) {
    (void)m;
    CHECK(s.prior.dist.mass(h) > 0.0);
  }
  CHECK(post.dist.total_mass() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("nested belief support in the shared variant is certainty", "[belief]") {
  auto s = setup(HistoryVariant::shared);
  auto zl = observation_sequence(s.realized, s.listener);
  BeliefState after = condition(s.w, s.prior, {zl[0], zl[1]}, &s.sem);
  auto nested = other_agent_belief(s.w, after, s.speaker,
                                   action_taken("Paul", 0, "modify"), "yes", s.prior, &s.sem, 1);
  REQUIRE(nested.size() == 1);
  CHECK(nested.support()[0].first == Catch::Approx(1.0).margin(expected::kTol));
}

TEST_CASE("nested belief in the diverging variant stays near the prior", "[belief]") {
  auto s = setup(HistoryVariant::diverging);
  auto zl = observation_sequence(s.realized, s.listener);
  BeliefState after = condition(s.w, s.prior, {zl[0], zl[1]}, &s.sem);
  auto nested = other_agent_belief(s.w, after, s.speaker,
                                   action_taken("Paul", 0, "modify"), "yes", s.prior, &s.sem, 1);
  REQUIRE(nested.size() == 2);
  CHECK(nested.support()[0].first ==
        Catch::Approx(expected::kKnewGivenSawBad).margin(expected::kTol));
  CHECK(nested.support()[0].second ==
        Catch::Approx(expected::kMassSawBad).margin(expected::kTol));
  CHECK(nested.support()[1].first ==
        Catch::Approx(expected::kKnewGivenSawGood).margin(expected::kTol));
  CHECK(nested.support()[1].second ==
        Catch::Approx(expected::kMassSawGood).margin(expected::kTol));
  for (const auto& [value, m] : nested.support()) {
    (void)m;
    CHECK(value < 0.1);
  }
}

TEST_CASE("full observability collapses nested beliefs", "[belief]") {
  WorldModel w = observable_world();
  QueryVariable coin = state_value_at("coin", 0);
  BeliefState shared = prior_belief(w, 0, 2);

  // Unconditioned: the other agent's belief is the shared prior itself.
  auto nested0 = other_agent_belief(w, shared, 1, coin, "heads", shared, nullptr, 0);
  REQUIRE(nested0.size() == 1);
  CHECK(nested0.support()[0].first ==
        Catch::Approx(marginal(w, shared, coin).mass("heads")).margin(expected::kTol));

  // Conditioned on anything: both agents saw it, so the nested belief is a
  // point mass at the owner's own marginal.
  auto hists = enumerate_histories(w, 2);
  for (const auto& h : hists) {
    auto z = observation_sequence(h, 0);
    for (std::size_t t = 1; t <= z.size(); ++t) {
      BeliefState owner = condition(w, shared, {z.begin(), z.begin() + t});
      auto nested = other_agent_belief(w, owner, 1, coin, "heads", shared);
      REQUIRE(nested.size() == 1);
      CHECK(nested.support()[0].first ==
            Catch::Approx(marginal(w, owner, coin).mass("heads")).margin(expected::kTol));
      CHECK(nested.support()[0].second == Catch::Approx(1.0).margin(expected::kTol));
    }
  }
}

TEST_CASE("nested belief default depth is the owner's depth", "[belief]") {
  auto s = setup(HistoryVariant::diverging);
  auto zl = observation_sequence(s.realized, s.listener);
  BeliefState before = condition(s.w, s.prior, {zl[0]}, &s.sem);
  QueryVariable q = action_taken("Paul", 0, "modify");
  auto by_default = other_agent_belief(s.w, before, s.speaker, q, "yes", s.prior, &s.sem);
  auto explicit_depth = other_agent_belief(s.w, before, s.speaker, q, "yes", s.prior, &s.sem, 1);
  REQUIRE(by_default.size() == explicit_depth.size());
  for (std::size_t i = 0; i < by_default.size(); ++i) {
    CHECK(by_default.support()[i].first ==
          Catch::Approx(explicit_depth.support()[i].first).margin(1e-12));
    CHECK(by_default.support()[i].second ==
          Catch::Approx(explicit_depth.support()[i].second).margin(1e-12));
  }
}
