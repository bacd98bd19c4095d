#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fauxpas/dist.hpp"
#include "fauxpas/errors.hpp"

namespace fauxpas {

/// A named state variable with a finite value domain.
struct VariableDecl {
  std::string name;
  std::vector<std::string> domain;
};

/// Complete assignment of every declared variable, stored as domain indices
/// in declaration order. Construction goes through WorldModel::make_state,
/// which guarantees in-domain values.
struct State {
  std::vector<int> values;

  auto operator<=>(const State&) const = default;
};

struct AgentId {
  std::size_t index;
  std::string label;
};

enum class ActionKind { physical, utterance, noop };

struct ActionDecl {
  std::string name;
  ActionKind kind;
};

/// One agent's action per agent, as indices into that agent's action list.
struct JointAction {
  std::vector<int> actions;

  auto operator<=>(const JointAction&) const = default;
};

/// A single observed fact: either a state variable carrying a value, or an
/// agent (referenced by label) having taken an action.
struct Percept {
  enum class Kind { variable, action };

  Kind kind;
  std::string ref;
  std::string value;

  auto operator<=>(const Percept&) const = default;
};

/// The set of percepts one agent receives in one step, kept sorted so that
/// observations compare as sets. A ref may appear at most once.
struct Observation {
  std::vector<Percept> percepts;

  static Observation of(std::vector<Percept> ps) {
    std::sort(ps.begin(), ps.end());
    for (std::size_t i = 1; i < ps.size(); ++i) {
      if (ps[i - 1].kind == ps[i].kind && ps[i - 1].ref == ps[i].ref) {
        throw SpecError("duplicate percept ref in observation: " + ps[i].ref);
      }
    }
    return Observation{std::move(ps)};
  }

  const Percept* find(Percept::Kind kind, const std::string& ref) const {
    for (const auto& p : percepts) {
      if (p.kind == kind && p.ref == ref) return &p;
    }
    return nullptr;
  }

  auto operator<=>(const Observation&) const = default;
};

/// One Observation per agent, in agent index order.
struct JointObservation {
  std::vector<Observation> per_agent;

  auto operator<=>(const JointObservation&) const = default;
};

struct WorldModel;

/// One clause of the transition function. `guard` decides applicability;
/// `outcomes` yields the joint distribution over (next state, joint
/// observation). Exactly one rule must match any reachable pair.
struct TransitionRule {
  std::string name;
  std::function<bool(const WorldModel&, const State&, const JointAction&)> guard;
  std::function<Dist<std::pair<State, JointObservation>>(
      const WorldModel&, const State&, const JointAction&)>
      outcomes;
};

/// Finite partially observable stochastic game: variables, agents, per-agent
/// action sets with per-step priors, an initial state distribution, and
/// transition rules producing next states and private observations.
struct WorldModel {
  std::vector<VariableDecl> variables;
  std::vector<AgentId> agents;
  std::vector<std::vector<ActionDecl>> actions;
  /// Per agent, per step: prior over that agent's action names. The last
  /// entry repeats for all later steps.
  std::vector<std::vector<Dist<std::string>>> action_priors;
  Dist<State> initial_states;
  std::vector<TransitionRule> rules;

  std::size_t variable_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (variables[i].name == name) return i;
    }
    throw SpecError("undeclared variable: " + name);
  }

  std::size_t agent_index(const std::string& label) const {
    for (const auto& a : agents) {
      if (a.label == label) return a.index;
    }
    throw SpecError("undeclared agent: " + label);
  }

  int domain_index(std::size_t var, const std::string& value) const {
    const auto& d = variables.at(var).domain;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == value) return static_cast<int>(i);
    }
    throw SpecError("value '" + value + "' not in domain of " + variables.at(var).name);
  }

  int action_index(std::size_t agent, const std::string& name) const {
    const auto& list = actions.at(agent);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].name == name) return static_cast<int>(i);
    }
    throw SpecError("agent " + agents.at(agent).label + " has no action '" + name + "'");
  }

  const ActionDecl& action_decl(std::size_t agent, int idx) const {
    return actions.at(agent).at(static_cast<std::size_t>(idx));
  }

  const std::string& action_name(std::size_t agent, int idx) const {
    return action_decl(agent, idx).name;
  }

  /// Prior over an agent's actions at a step; the last declared entry
  /// carries forward indefinitely.
  const Dist<std::string>& action_prior(std::size_t agent, int step) const {
    const auto& per_step = action_priors.at(agent);
    if (per_step.empty()) throw SpecError("agent has no action priors");
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(step), per_step.size() - 1);
    return per_step[i];
  }

  State make_state(const std::map<std::string, std::string>& assignment) const {
    if (assignment.size() != variables.size()) {
      throw SpecError("state must assign every declared variable");
    }
    State s;
    s.values.reserve(variables.size());
    for (std::size_t v = 0; v < variables.size(); ++v) {
      auto it = assignment.find(variables[v].name);
      if (it == assignment.end()) throw SpecError("state missing variable: " + variables[v].name);
      s.values.push_back(domain_index(v, it->second));
    }
    return s;
  }

  const std::string& state_value(const State& s, const std::string& var) const {
    std::size_t v = variable_index(var);
    return variables[v].domain.at(static_cast<std::size_t>(s.values.at(v)));
  }

  State with_value(State s, const std::string& var, const std::string& value) const {
    std::size_t v = variable_index(var);
    s.values.at(v) = domain_index(v, value);
    return s;
  }

  std::string describe(const State& s) const {
    std::string out = "{";
    for (std::size_t v = 0; v < variables.size(); ++v) {
      if (v) out += ", ";
      out += variables[v].name + "=" + variables[v].domain.at(static_cast<std::size_t>(s.values.at(v)));
    }
    return out + "}";
  }

  std::string describe(const JointAction& a) const {
    std::string out = "(";
    for (std::size_t i = 0; i < a.actions.size(); ++i) {
      if (i) out += ", ";
      out += agents[i].label + ":" + action_name(i, a.actions[i]);
    }
    return out + ")";
  }
};

/// Structural checks on a hand-assembled world. Scenario-built worlds pass by
/// construction; this exists for custom worlds in tests and tooling.
inline void validate_world(const WorldModel& w) {
  if (w.agents.empty()) throw SpecError("world declares no agents");
  for (std::size_t i = 0; i < w.agents.size(); ++i) {
    if (w.agents[i].index != i) throw SpecError("agent indices must be contiguous from 0");
    for (std::size_t j = i + 1; j < w.agents.size(); ++j) {
      if (w.agents[i].label == w.agents[j].label) {
        throw SpecError("duplicate agent label: " + w.agents[i].label);
      }
    }
  }
  if (w.variables.empty()) throw SpecError("world declares no variables");
  for (std::size_t i = 0; i < w.variables.size(); ++i) {
    if (w.variables[i].domain.empty()) {
      throw SpecError("empty domain for variable: " + w.variables[i].name);
    }
    for (std::size_t j = i + 1; j < w.variables.size(); ++j) {
      if (w.variables[i].name == w.variables[j].name) {
        throw SpecError("duplicate variable: " + w.variables[i].name);
      }
    }
  }
  if (w.actions.size() != w.agents.size() || w.action_priors.size() != w.agents.size()) {
    throw SpecError("actions and action priors must cover every agent");
  }
  if (w.initial_states.empty()) throw SpecError("world has no initial state distribution");
  for (std::size_t a = 0; a < w.agents.size(); ++a) {
    if (w.actions[a].empty()) throw SpecError("agent has no actions: " + w.agents[a].label);
    if (w.action_priors[a].empty()) {
      throw SpecError("agent has no action priors: " + w.agents[a].label);
    }
    for (const auto& per_step : w.action_priors[a]) {
      for (const auto& [name, p] : per_step.support()) {
        (void)p;
        w.action_index(a, name);
      }
    }
  }
  for (const auto& [s, p] : w.initial_states.support()) {
    (void)p;
    if (s.values.size() != w.variables.size()) {
      throw SpecError("initial state has wrong arity");
    }
    for (std::size_t v = 0; v < s.values.size(); ++v) {
      if (s.values[v] < 0 || static_cast<std::size_t>(s.values[v]) >= w.variables[v].domain.size()) {
        throw SpecError("initial state value out of domain for " + w.variables[v].name);
      }
    }
  }
  if (w.rules.empty()) throw SpecError("world declares no transition rules");
}

/// Applies the unique matching transition rule. Zero matches raise
/// NoMatchingRuleError, several matches raise SpecError: the rule set must
/// partition the reachable (state, action) space.
inline Dist<std::pair<State, JointObservation>> transition(const WorldModel& w, const State& s,
                                                           const JointAction& a) {
  const TransitionRule* matched = nullptr;
  for (const auto& r : w.rules) {
    if (!r.guard(w, s, a)) continue;
    if (matched) {
      throw SpecError("ambiguous transition: rules '" + matched->name + "' and '" + r.name +
                      "' both match " + w.describe(s) + " " + w.describe(a));
    }
    matched = &r;
  }
  if (!matched) {
    throw NoMatchingRuleError("no transition rule matches " + w.describe(s) + " " + w.describe(a));
  }
  return matched->outcomes(w, s, a);
}

}  // namespace fauxpas
