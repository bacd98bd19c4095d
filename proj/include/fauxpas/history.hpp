#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "fauxpas/errors.hpp"
#include "fauxpas/world.hpp"

namespace fauxpas {

inline constexpr std::size_t kDefaultHistoryCap = 1'000'000;

/// One complete possible unfolding of the game up to a horizon: the atomic
/// hypothesis of all inference. For horizon T it holds T+1 states and T
/// (joint action, joint observation) steps. `weight` is the unfolding's
/// generative probability; it rides along but never enters identity.
struct History {
  std::vector<State> states;
  std::vector<JointAction> actions;
  std::vector<JointObservation> observations;
  double weight = 0.0;

  int horizon() const { return static_cast<int>(actions.size()); }
  const State& initial_state() const { return states.front(); }
  const State& final_state() const { return states.back(); }

  auto identity() const { return std::tie(states, actions, observations); }

  bool operator==(const History& o) const { return identity() == o.identity(); }
  bool operator<(const History& o) const { return identity() < o.identity(); }
};

/// Partial pinning of actions: (step, agent index) to action name. Pinned
/// actions replace that agent's step prior with a point mass.
struct Script {
  std::map<std::pair<int, std::size_t>, std::string> pinned;

  std::optional<std::string> at(int step, std::size_t agent) const {
    auto it = pinned.find({step, agent});
    if (it == pinned.end()) return std::nullopt;
    return it->second;
  }

  Script& pin(int step, std::size_t agent, std::string action) {
    pinned[{step, agent}] = std::move(action);
    return *this;
  }
};

namespace detail {

inline void expand_actions(const WorldModel& w, int step, const Script& script, std::size_t agent,
                           JointAction& partial, double weight,
                           const std::function<void(const JointAction&, double)>& emit) {
  if (agent == w.agents.size()) {
    emit(partial, weight);
    return;
  }
  if (auto pinned = script.at(step, agent)) {
    partial.actions.push_back(w.action_index(agent, *pinned));
    expand_actions(w, step, script, agent + 1, partial, weight, emit);
    partial.actions.pop_back();
    return;
  }
  for (const auto& [name, p] : w.action_prior(agent, step).support()) {
    partial.actions.push_back(w.action_index(agent, name));
    expand_actions(w, step, script, agent + 1, partial, weight * p, emit);
    partial.actions.pop_back();
  }
}

}  // namespace detail

/// Exhaustively enumerates every history reachable in `horizon` steps as a
/// weighted set. Weights multiply the initial state prior, the action priors
/// of unscripted choices (scripted ones count as certain), and transition
/// outcome masses; over the full set they sum to 1. Depth first in declared
/// order, so the output order is deterministic. Raises ExplosionGuardError
/// when the history count would exceed `cap`.
inline std::vector<History> enumerate_histories(const WorldModel& w, int horizon,
                                                const Script& script = {},
                                                std::size_t cap = kDefaultHistoryCap) {
  if (horizon < 0) throw SpecError("horizon must be nonnegative");
  std::vector<History> out;

  std::function<void(History&, int)> walk = [&](History& h, int step) {
    if (step == horizon) {
      if (out.size() >= cap) {
        throw ExplosionGuardError(cap, "history enumeration exceeds cap");
      }
      out.push_back(h);
      return;
    }
    JointAction partial;
    detail::expand_actions(
        w, step, script, 0, partial, 1.0, [&](const JointAction& a, double aw) {
          auto outcomes = transition(w, h.states.back(), a);
          for (const auto& [outcome, p] : outcomes.support()) {
            h.states.push_back(outcome.first);
            h.actions.push_back(a);
            h.observations.push_back(outcome.second);
            double saved = h.weight;
            h.weight *= aw * p;
            walk(h, step + 1);
            h.weight = saved;
            h.states.pop_back();
            h.actions.pop_back();
            h.observations.pop_back();
          }
        });
  };

  for (const auto& [s0, p0] : w.initial_states.support()) {
    History h;
    h.states.push_back(s0);
    h.weight = p0;
    walk(h, 0);
  }
  return out;
}

/// One agent's private projection of a history's observations.
inline std::vector<Observation> observation_sequence(const History& h, std::size_t agent) {
  std::vector<Observation> seq;
  seq.reserve(h.observations.size());
  for (const auto& joint : h.observations) {
    seq.push_back(joint.per_agent.at(agent));
  }
  return seq;
}

}  // namespace fauxpas
