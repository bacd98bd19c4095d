#pragma once

// Pseudo-random small two-agent worlds for exercising enumeration and
// conditioning. Every random draw happens while building the lookup table,
// so the produced world behaves deterministically.

#include <map>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "fauxpas/fauxpas.hpp"

namespace testworlds {

inline std::vector<fauxpas::State> all_states(const fauxpas::WorldModel& w) {
  std::vector<fauxpas::State> out = {fauxpas::State{}};
  for (const auto& var : w.variables) {
    std::vector<fauxpas::State> next;
    for (const auto& s : out) {
      for (std::size_t i = 0; i < var.domain.size(); ++i) {
        fauxpas::State grown = s;
        grown.values.push_back(static_cast<int>(i));
        next.push_back(std::move(grown));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline fauxpas::WorldModel random_world(std::mt19937& rng) {
  using namespace fauxpas;
  WorldModel w;
  std::uniform_int_distribution<int> var_count(1, 2);
  std::uniform_int_distribution<int> dom_size(2, 3);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution rare(0.3);

  int nv = var_count(rng);
  for (int v = 0; v < nv; ++v) {
    VariableDecl decl;
    decl.name = "v" + std::to_string(v);
    int n = dom_size(rng);
    for (int i = 0; i < n; ++i) decl.domain.push_back("x" + std::to_string(i));
    w.variables.push_back(std::move(decl));
  }
  w.agents = {{0, "A"}, {1, "B"}};
  w.actions = {{{"a0", ActionKind::physical}, {"a1", ActionKind::physical}},
               {{"b0", ActionKind::physical}, {"b1", ActionKind::physical}}};
  for (std::size_t a = 0; a < 2; ++a) {
    std::vector<Dist<std::string>::Entry> weights;
    for (const auto& decl : w.actions[a]) weights.emplace_back(decl.name, unit(rng));
    w.action_priors.push_back({Dist<std::string>::from_weights(std::move(weights))});
  }

  std::vector<State> states = all_states(w);
  std::uniform_int_distribution<std::size_t> pick_state(0, states.size() - 1);
  std::vector<Dist<State>::Entry> init;
  init.emplace_back(states[pick_state(rng)], unit(rng));
  if (states.size() > 1 && coin(rng)) {
    State other = states[pick_state(rng)];
    if (!(other == init[0].first)) init.emplace_back(other, unit(rng));
  }
  w.initial_states = Dist<State>::from_weights(std::move(init));

  auto random_observation = [&](const WorldModel& world, const State& next,
                                const JointAction& act, std::size_t agent) {
    std::vector<Percept> ps;
    ps.push_back({Percept::Kind::action, world.agents[agent].label,
                  world.action_name(agent, act.actions[agent])});
    if (rare(rng)) {
      std::size_t other = 1 - agent;
      ps.push_back({Percept::Kind::action, world.agents[other].label,
                    world.action_name(other, act.actions[other])});
    }
    for (std::size_t v = 0; v < world.variables.size(); ++v) {
      if (coin(rng)) {
        ps.push_back({Percept::Kind::variable, world.variables[v].name,
                      world.state_value(next, world.variables[v].name)});
      }
    }
    return Observation::of(std::move(ps));
  };

  auto table = std::make_shared<std::map<std::pair<State, JointAction>,
                                         Dist<std::pair<State, JointObservation>>>>();
  for (const auto& s : states) {
    for (int ia = 0; ia < 2; ++ia) {
      for (int ib = 0; ib < 2; ++ib) {
        JointAction act{{ia, ib}};
        int branches = coin(rng) ? 2 : 1;
        std::vector<Dist<std::pair<State, JointObservation>>::Entry> outcomes;
        for (int k = 0; k < branches; ++k) {
          State next = states[pick_state(rng)];
          JointObservation jo;
          jo.per_agent.push_back(random_observation(w, next, act, 0));
          jo.per_agent.push_back(random_observation(w, next, act, 1));
          outcomes.emplace_back(std::make_pair(std::move(next), std::move(jo)), unit(rng));
        }
        (*table)[{s, act}] =
            Dist<std::pair<State, JointObservation>>::from_weights(std::move(outcomes));
      }
    }
  }
  w.rules.push_back(TransitionRule{
      "tabulated step",
      [](const WorldModel&, const State&, const JointAction&) { return true; },
      [table](const WorldModel&, const State& s, const JointAction& a) {
        return table->at({s, a});
      }});
  return w;
}

}  // namespace testworlds
