#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fauxpas/belief.hpp"
#include "fauxpas/speaker.hpp"

namespace fauxpas {

/// One hypothesis about the speaker's goal weights, with its prior mass.
struct SpeakerHypothesis {
  std::string label;
  double prior = 0.0;
  SpeakerParams params;
};

inline void validate_hypotheses(const std::vector<SpeakerHypothesis>& hyps) {
  if (hyps.empty()) throw SpecError("at least one speaker hypothesis required");
  double total = 0.0;
  for (const auto& h : hyps) {
    if (h.prior < 0.0) throw SpecError("hypothesis prior must be nonnegative: " + h.label);
    total += h.prior;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw SpecError("hypothesis priors must sum to 1");
  }
}

/// Joint posterior over (history, speaker hypothesis index), plus the
/// hypothesis list it indexes into.
struct SophisticatedPosterior {
  Dist<std::pair<History, std::size_t>> joint;
  std::vector<SpeakerHypothesis> hypotheses;

  Dist<History> history_marginal() const {
    std::vector<Dist<History>::Entry> weighted;
    weighted.reserve(joint.size());
    for (const auto& [hk, mass] : joint.support()) {
      weighted.emplace_back(hk.first, mass);
    }
    return Dist<History>::from_weights(std::move(weighted));
  }

  double hypothesis_mass(std::size_t index) const {
    double acc = 0.0;
    for (const auto& [hk, mass] : joint.support()) {
      if (hk.second == index) acc += mass;
    }
    return acc;
  }

  double hypothesis_mass(const std::string& label) const {
    double acc = 0.0;
    for (const auto& [hk, mass] : joint.support()) {
      if (hypotheses.at(hk.second).label == label) acc += mass;
    }
    return acc;
  }
};

/// How the listener models speaker choice: a policy over utterances given the
/// speaker's simulated belief and hypothesized goal weights. Injectable so the
/// intentional model can be swapped for, say, the literal likelihood.
using PolicyFn =
    std::function<Dist<std::string>(const BeliefState& speaker_belief, const SpeakerParams&)>;

/// The pragmatic listener: on hearing an utterance it jointly infers the
/// history and the speaker's goal weights. Each surviving hypothesis pairs a
/// history whose recorded speaker action is the heard utterance with goal
/// weights theta; its posterior mass is proportional to
///   prior(history) * prior(theta) * policy(heard | simulated speaker belief, theta)
/// where the speaker's belief is reconstructed from the speaker's observation
/// prefix inside that history.
inline SophisticatedPosterior sophisticated_listener(
    const WorldModel& w, const BeliefState& listener_belief, const std::string& heard,
    std::vector<SpeakerHypothesis> hypotheses, const UtteranceSemantics& sem,
    const std::vector<std::string>& utterances, const BeliefState& shared_prior,
    const PolicyFn& policy = {}) {
  validate_hypotheses(hypotheses);
  std::size_t speaker = detail::sole_other_agent(w, listener_belief.owner);
  int step = static_cast<int>(listener_belief.conditioned_on.size());
  PolicyFn choose = policy;
  if (!choose) {
    choose = [&](const BeliefState& b, const SpeakerParams& p) {
      return speaker_policy(w, b, p, sem, utterances, shared_prior);
    };
  }
  BeliefState speaker_prior = reowned(shared_prior, speaker);
  std::vector<Dist<std::pair<History, std::size_t>>::Entry> weighted;
  for (const auto& [h, mass] : listener_belief.dist.support()) {
    int recorded = h.actions.at(static_cast<std::size_t>(step)).actions.at(speaker);
    if (w.action_name(speaker, recorded) != heard) continue;
    auto seq = observation_sequence(h, speaker);
    seq.resize(static_cast<std::size_t>(step));
    BeliefState simulated = condition(w, speaker_prior, seq, &sem);
    for (std::size_t k = 0; k < hypotheses.size(); ++k) {
      double like = choose(simulated, hypotheses[k].params).mass(heard);
      double weight = mass * hypotheses[k].prior * like;
      if (weight > 0.0) weighted.emplace_back(std::make_pair(h, k), weight);
    }
  }
  if (weighted.empty()) {
    throw ZeroPosteriorError("heard utterance has zero probability under every hypothesis");
  }
  return SophisticatedPosterior{
      Dist<std::pair<History, std::size_t>>::from_weights(std::move(weighted)),
      std::move(hypotheses)};
}

}  // namespace fauxpas
