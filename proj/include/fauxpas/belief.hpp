#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fauxpas/dist.hpp"
#include "fauxpas/errors.hpp"
#include "fauxpas/history.hpp"
#include "fauxpas/semantics.hpp"
#include "fauxpas/world.hpp"

namespace fauxpas {

/// An agent's exact posterior over full-horizon histories, together with the
/// observation prefix it has been conditioned on. Beliefs always range over
/// complete unfoldings; "belief at time t" means conditioning on the owner's
/// first t observations.
struct BeliefState {
  std::size_t owner = 0;
  Dist<History> dist;
  std::vector<Observation> conditioned_on;
};

/// A named feature of a history, extracted as a string value.
struct QueryVariable {
  std::string name;
  std::function<std::string(const WorldModel&, const History&)> extract;
};

/// Query for a state variable's value at a fixed step; step -1 means the
/// final state.
inline QueryVariable state_value_at(const std::string& variable, int step = -1) {
  std::string name = variable + (step < 0 ? "@final" : "@" + std::to_string(step));
  return {name, [variable, step](const WorldModel& w, const History& h) -> std::string {
            const State& s = step < 0 ? h.final_state()
                                      : h.states.at(static_cast<std::size_t>(step));
            return w.state_value(s, variable);
          }};
}

/// Query for whether an agent took a given action at a step: "yes" or "no".
inline QueryVariable action_taken(const std::string& agent_label, int step,
                                  const std::string& action) {
  std::string name = agent_label + ":" + action + "@" + std::to_string(step);
  return {name, [agent_label, step, action](const WorldModel& w, const History& h) -> std::string {
            std::size_t agent = w.agent_index(agent_label);
            int idx = h.actions.at(static_cast<std::size_t>(step)).actions.at(agent);
            return w.action_name(agent, idx) == action ? "yes" : "no";
          }};
}

/// The agent's belief before any observation: the full weighted enumeration
/// under the given script.
inline BeliefState prior_belief(const WorldModel& w, std::size_t owner, int horizon,
                                const Script& script = {},
                                std::size_t cap = kDefaultHistoryCap) {
  auto hists = enumerate_histories(w, horizon, script, cap);
  std::vector<Dist<History>::Entry> weighted;
  weighted.reserve(hists.size());
  for (auto& h : hists) {
    double weight = h.weight;
    weighted.emplace_back(std::move(h), weight);
  }
  return BeliefState{owner, Dist<History>::from_weights(std::move(weighted)), {}};
}

/// Same distribution viewed from another agent's perspective.
inline BeliefState reowned(BeliefState b, std::size_t owner) {
  b.owner = owner;
  return b;
}

namespace detail {

inline bool is_heard_utterance(const Percept& p, const std::string& owner_label,
                               const UtteranceSemantics* sem) {
  return sem != nullptr && p.kind == Percept::Kind::action && p.ref != owner_label &&
         sem->defines(p.value);
}

/// Likelihood of one observed step given the projected step of a hypothesis.
/// All percepts except heard utterances must match exactly as sets; heard
/// utterances must match by identity and each contributes the literal truth
/// factor (1 - eps) or eps evaluated on the hypothesis.
inline double step_likelihood(const WorldModel& w, const History& h, const Observation& projected,
                              const Observation& observed, const std::string& owner_label,
                              const UtteranceSemantics* sem) {
  if (sem == nullptr) return projected == observed ? 1.0 : 0.0;
  auto split = [&](const Observation& o) {
    std::pair<std::vector<Percept>, std::vector<Percept>> parts;
    for (const auto& p : o.percepts) {
      (is_heard_utterance(p, owner_label, sem) ? parts.second : parts.first).push_back(p);
    }
    return parts;
  };
  auto [proj_rest, proj_utts] = split(projected);
  auto [obs_rest, obs_utts] = split(observed);
  if (proj_rest != obs_rest || proj_utts != obs_utts) return 0.0;
  double factor = 1.0;
  for (const auto& p : obs_utts) {
    factor *= literal_utterance_likelihood(p.value, *sem, w, h);
  }
  return factor;
}

}  // namespace detail

/// Exact Bayesian conditioning on further observations, appended after the
/// prefix the belief is already conditioned on. Without semantics the
/// likelihood is hard set membership: a hypothesis survives iff its projected
/// observations equal the observed ones step by step. With semantics, heard
/// utterances instead contribute soft literal truth factors, so a hypothesis
/// on which the utterance is false survives at epsilon weight. Conditioning
/// on impossible evidence raises ZeroPosteriorError.
inline BeliefState condition(const WorldModel& w, const BeliefState& belief,
                             const std::vector<Observation>& observed,
                             const UtteranceSemantics* sem = nullptr) {
  std::size_t offset = belief.conditioned_on.size();
  const std::string& owner_label = w.agents.at(belief.owner).label;
  std::vector<Dist<History>::Entry> weighted;
  for (const auto& [h, mass] : belief.dist.support()) {
    if (offset + observed.size() > h.observations.size()) {
      throw SpecError("conditioning beyond the belief's horizon");
    }
    double like = 1.0;
    for (std::size_t i = 0; i < observed.size() && like > 0.0; ++i) {
      const Observation& projected = h.observations[offset + i].per_agent.at(belief.owner);
      like *= detail::step_likelihood(w, h, projected, observed[i], owner_label, sem);
    }
    if (like > 0.0) weighted.emplace_back(h, mass * like);
  }
  if (weighted.empty()) {
    throw ZeroPosteriorError("observations are impossible under the belief of " + owner_label);
  }
  BeliefState out{belief.owner, Dist<History>::from_weights(std::move(weighted)),
                  belief.conditioned_on};
  out.conditioned_on.insert(out.conditioned_on.end(), observed.begin(), observed.end());
  return out;
}

/// Marginal distribution of a query variable under the belief.
inline Dist<std::string> marginal(const WorldModel& w, const BeliefState& belief,
                                  const QueryVariable& query) {
  std::vector<Dist<std::string>::Entry> weighted;
  weighted.reserve(belief.dist.size());
  for (const auto& [h, mass] : belief.dist.support()) {
    weighted.emplace_back(query.extract(w, h), mass);
  }
  return Dist<std::string>::from_weights(std::move(weighted));
}

/// Expectation of a history functional under the belief.
inline double expectation(const BeliefState& belief,
                          const std::function<double(const History&)>& fn) {
  double acc = 0.0;
  for (const auto& [h, mass] : belief.dist.support()) acc += mass * fn(h);
  return acc;
}

/// Second-order belief: the owner's distribution over the probability that
/// `other` assigns to `query == value`. For each hypothesis the owner
/// entertains, the other agent's belief is reconstructed exactly by
/// conditioning the shared prior on the other agent's first `steps`
/// observations within that hypothesis, and its marginal probability of the
/// queried value becomes one support point, weighted by the owner's mass.
/// `steps` defaults to the owner's own conditioning depth. Support values
/// closer than 1e-9 merge into one point.
inline Dist<double> other_agent_belief(const WorldModel& w, const BeliefState& belief,
                                       std::size_t other, const QueryVariable& query,
                                       const std::string& value, const BeliefState& shared_prior,
                                       const UtteranceSemantics* sem = nullptr, int steps = -1) {
  std::size_t depth =
      steps < 0 ? belief.conditioned_on.size() : static_cast<std::size_t>(steps);
  BeliefState other_prior = reowned(shared_prior, other);
  std::vector<std::pair<double, double>> points;
  points.reserve(belief.dist.size());
  for (const auto& [h, mass] : belief.dist.support()) {
    auto seq = observation_sequence(h, other);
    if (depth > seq.size()) throw SpecError("nested belief depth exceeds horizon");
    seq.resize(depth);
    BeliefState nested = condition(w, other_prior, seq, sem);
    points.emplace_back(marginal(w, nested, query).mass(value), mass);
  }
  std::sort(points.begin(), points.end());
  std::vector<Dist<double>::Entry> merged;
  for (const auto& [p, mass] : points) {
    if (!merged.empty() && p - merged.back().first < 1e-9) {
      merged.back().second += mass;
    } else {
      merged.emplace_back(p, mass);
    }
  }
  return Dist<double>::from_weights(std::move(merged));
}

}  // namespace fauxpas
