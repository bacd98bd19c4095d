#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fauxpas/belief.hpp"
#include "fauxpas/dist.hpp"
#include "fauxpas/errors.hpp"
#include "fauxpas/semantics.hpp"

namespace fauxpas {

/// Speaker goal weights and choice noise. The informative weight scores the
/// listener's belief gain in the true value of the informative variable; the
/// evaluative weight scores the listener's belief shift in the evaluative
/// target (negative weight means the speaker values harm).
struct SpeakerParams {
  double theta_info = 1.0;
  double theta_eval = 0.0;
  double rationality = 3.0;
  QueryVariable info_variable;
  QueryVariable eval_variable;
  std::string eval_target;
};

inline void validate_params(const SpeakerParams& p) {
  if (!(p.rationality >= 0.0) || !std::isfinite(p.rationality)) {
    throw SpecError("rationality must be finite and nonnegative");
  }
  if (!std::isfinite(p.theta_info) || !std::isfinite(p.theta_eval)) {
    throw SpecError("goal weights must be finite");
  }
}

/// Change in the listener's belief that the informative variable has its true
/// value, induced by an update from `before` to `after`.
inline double delta_info(const WorldModel& w, const BeliefState& before, const BeliefState& after,
                         const QueryVariable& query, const std::string& true_value) {
  return marginal(w, after, query).mass(true_value) -
         marginal(w, before, query).mass(true_value);
}

/// Change in the listener's belief that the evaluative variable holds its
/// target value. Negative values are offense.
inline double delta_eval(const WorldModel& w, const BeliefState& before, const BeliefState& after,
                         const QueryVariable& query, const std::string& target) {
  return marginal(w, after, query).mass(target) - marginal(w, before, query).mass(target);
}

/// Linear speaker reward over the two belief shifts.
inline double speaker_reward(const SpeakerParams& p, double d_info, double d_eval) {
  return p.theta_info * d_info + p.theta_eval * d_eval;
}

namespace detail {

inline std::size_t sole_other_agent(const WorldModel& w, std::size_t owner) {
  if (w.agents.size() != 2) {
    throw SpecError("speaker and listener models require exactly two agents");
  }
  return 1 - owner;
}

/// What the listener would observe at step t of hypothesis h, had the speaker
/// taken `utterance` instead of h's recorded action. Reruns the transition
/// with the substituted joint action, which must be deterministic there.
inline Observation counterfactual_listener_observation(const WorldModel& w, const History& h,
                                                       int step, const std::string& utterance,
                                                       std::size_t speaker,
                                                       std::size_t listener) {
  JointAction a = h.actions.at(static_cast<std::size_t>(step));
  a.actions.at(speaker) = w.action_index(speaker, utterance);
  auto outcomes = transition(w, h.states.at(static_cast<std::size_t>(step)), a);
  if (outcomes.size() != 1) {
    throw SpecError("counterfactual utterance step must have a deterministic outcome");
  }
  return outcomes.support().front().first.second.per_agent.at(listener);
}

}  // namespace detail

/// Value of an utterance to the speaker, with its decomposition.
struct SpeakerValue {
  double value = 0.0;
  double expected_delta_info = 0.0;
  double expected_delta_eval = 0.0;
};

/// Expected utility of uttering `utterance` now, from the speaker's belief.
/// For each history the speaker entertains, the listener's belief is
/// simulated twice from the shared prior: conditioned on the listener's
/// observations so far, then additionally on the step the utterance would
/// produce. The informative shift is scored at the hypothesis's own true
/// value; the evaluative shift at the fixed target. Shifts are averaged under
/// the speaker's belief and combined linearly by the goal weights.
inline SpeakerValue speaker_value(const WorldModel& w, const BeliefState& belief,
                                  const std::string& utterance, const SpeakerParams& params,
                                  const UtteranceSemantics& sem,
                                  const BeliefState& shared_prior) {
  validate_params(params);
  std::size_t listener = detail::sole_other_agent(w, belief.owner);
  int step = static_cast<int>(belief.conditioned_on.size());
  BeliefState listener_prior = reowned(shared_prior, listener);
  SpeakerValue out;
  for (const auto& [h, mass] : belief.dist.support()) {
    auto seq = observation_sequence(h, listener);
    seq.resize(static_cast<std::size_t>(step));
    BeliefState before = condition(w, listener_prior, seq, &sem);
    Observation heard =
        detail::counterfactual_listener_observation(w, h, step, utterance, belief.owner, listener);
    BeliefState after = condition(w, before, {heard}, &sem);
    std::string true_info = params.info_variable.extract(w, h);
    out.expected_delta_info += mass * delta_info(w, before, after, params.info_variable, true_info);
    out.expected_delta_eval +=
        mass * delta_eval(w, before, after, params.eval_variable, params.eval_target);
  }
  out.value = speaker_reward(params, out.expected_delta_info, out.expected_delta_eval);
  return out;
}

/// Luce choice over candidate utterances: probabilities proportional to the
/// exponentiated rationality-scaled values. The running maximum is subtracted
/// before exponentiation for numeric stability, which also makes the shift
/// invariance of the rule explicit.
inline Dist<std::string> luce_choice(const std::vector<std::pair<std::string, double>>& values,
                                     double rationality) {
  if (values.empty()) throw SpecError("choice rule needs at least one candidate");
  double vmax = values.front().second;
  for (const auto& [name, v] : values) vmax = std::max(vmax, v);
  std::vector<Dist<std::string>::Entry> weighted;
  weighted.reserve(values.size());
  for (const auto& [name, v] : values) {
    weighted.emplace_back(name, std::exp(rationality * (v - vmax)));
  }
  return Dist<std::string>::from_weights(std::move(weighted));
}

/// The speaker's stochastic utterance policy over a candidate set.
inline Dist<std::string> speaker_policy(const WorldModel& w, const BeliefState& belief,
                                        const SpeakerParams& params,
                                        const UtteranceSemantics& sem,
                                        const std::vector<std::string>& utterances,
                                        const BeliefState& shared_prior) {
  std::vector<std::pair<std::string, double>> values;
  values.reserve(utterances.size());
  for (const auto& u : utterances) {
    values.emplace_back(u, speaker_value(w, belief, u, params, sem, shared_prior).value);
  }
  return luce_choice(values, params.rationality);
}

}  // namespace fauxpas
