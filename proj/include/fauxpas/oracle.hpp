#pragma once

// Brute-force reference implementation used to cross-check the engine.
// Everything here is recomputed from the model primitives with flat vectors
// and batch renormalization, independently of Dist, BeliefState, condition,
// speaker_value, and sophisticated_listener. Only the model definition
// itself (WorldModel data, transition rule functions, denotations) is shared,
// since that is the object under test's input, not its code.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fauxpas/scenario.hpp"

namespace fauxpas::oracle {

struct Path {
  std::vector<State> states;
  std::vector<JointAction> acts;
  std::vector<JointObservation> obs;
  double prob = 0.0;
};

inline const TransitionRule& sole_rule(const WorldModel& w, const State& s,
                                       const JointAction& a) {
  const TransitionRule* hit = nullptr;
  int count = 0;
  for (const auto& r : w.rules) {
    if (r.guard(w, s, a)) {
      hit = &r;
      ++count;
    }
  }
  if (count != 1) throw std::runtime_error("oracle: rule match count != 1");
  return *hit;
}

/// Breadth-first exhaustive enumeration with an odometer over joint actions.
inline std::vector<Path> enumerate_paths(const WorldModel& w, int horizon,
                                         const Script& script) {
  std::vector<Path> frontier;
  for (const auto& [s0, p0] : w.initial_states.support()) {
    Path p;
    p.states.push_back(s0);
    p.prob = p0;
    frontier.push_back(p);
  }
  std::size_t n = w.agents.size();
  for (int t = 0; t < horizon; ++t) {
    std::vector<std::vector<std::pair<int, double>>> choices(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto pinned = script.at(t, i);
      if (pinned) {
        choices[i].push_back({w.action_index(i, *pinned), 1.0});
      } else {
        for (const auto& [name, p] : w.action_prior(i, t).support()) {
          choices[i].push_back({w.action_index(i, name), p});
        }
      }
    }
    std::vector<Path> next;
    for (const auto& path : frontier) {
      std::vector<std::size_t> odo(n, 0);
      while (true) {
        JointAction a;
        double ap = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          a.actions.push_back(choices[i][odo[i]].first);
          ap *= choices[i][odo[i]].second;
        }
        auto outcomes = sole_rule(w, path.states.back(), a).outcomes(w, path.states.back(), a);
        for (const auto& [sz, op] : outcomes.support()) {
          Path q = path;
          q.states.push_back(sz.first);
          q.acts.push_back(a);
          q.obs.push_back(sz.second);
          q.prob = path.prob * ap * op;
          next.push_back(q);
        }
        std::size_t i = 0;
        while (i < n && ++odo[i] == choices[i].size()) odo[i++] = 0;
        if (i == n) break;
      }
    }
    frontier = next;
  }
  return frontier;
}

inline bool heard_utterance_percept(const Percept& p, const std::string& owner_label,
                                    const UtteranceSemantics& sem) {
  return p.kind == Percept::Kind::action && p.ref != owner_label &&
         sem.denotations.count(p.value) > 0;
}

/// Batch posterior weights over `paths` for an agent having seen `seen`.
inline std::vector<double> posterior(const WorldModel& w, const std::vector<Path>& paths,
                                     std::size_t owner, const std::vector<Observation>& seen,
                                     const UtteranceSemantics& sem) {
  const std::string& label = w.agents[owner].label;
  std::vector<double> wts(paths.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    double like = paths[i].prob;
    for (std::size_t t = 0; t < seen.size() && like > 0.0; ++t) {
      const Observation& proj = paths[i].obs[t].per_agent[owner];
      std::vector<Percept> hard_seen, utt_seen, hard_proj, utt_proj;
      for (const auto& p : seen[t].percepts) {
        (heard_utterance_percept(p, label, sem) ? utt_seen : hard_seen).push_back(p);
      }
      for (const auto& p : proj.percepts) {
        (heard_utterance_percept(p, label, sem) ? utt_proj : hard_proj).push_back(p);
      }
      if (hard_seen != hard_proj || utt_seen != utt_proj) {
        like = 0.0;
        break;
      }
      for (const auto& p : utt_seen) {
        History shim;
        shim.states = paths[i].states;
        shim.actions = paths[i].acts;
        shim.observations = paths[i].obs;
        bool truth = sem.denotations.at(p.value)(w, shim);
        like *= truth ? (1.0 - sem.epsilon) : sem.epsilon;
      }
    }
    wts[i] = like;
    total += like;
  }
  if (total <= 0.0) throw std::runtime_error("oracle: zero posterior");
  for (auto& x : wts) x /= total;
  return wts;
}

inline std::vector<Observation> project(const Path& p, std::size_t agent, std::size_t steps) {
  std::vector<Observation> out;
  for (std::size_t t = 0; t < steps; ++t) out.push_back(p.obs[t].per_agent[agent]);
  return out;
}

/// Self-contained profile computation for one variant. Returns the numeric
/// profile fields keyed by their stable names.
inline std::map<std::string, double> profile(const ScenarioSpec& spec, HistoryVariant v,
                                             const std::vector<SpeakerHypothesis>& hyps) {
  WorldModel w = build_world(spec);
  UtteranceSemantics sem = build_semantics(spec);
  std::size_t L = w.agent_index(spec.listener_label);
  std::size_t S = w.agent_index(spec.speaker_label);
  const std::string entry =
      v == HistoryVariant::shared ? spec.shared_entry : spec.diverging_entry;

  Script common;
  common.pin(0, S, entry);
  std::vector<Path> prior = enumerate_paths(w, spec.horizon, common);

  Script full = common;
  full.pin(0, L, "modify");
  full.pin(1, L, "wait");
  full.pin(1, S, spec.spoken_utterance);
  std::vector<Path> scripted = enumerate_paths(w, spec.horizon, full);
  const Path* realized = nullptr;
  for (const auto& p : scripted) {
    History shim;
    shim.states = p.states;
    shim.actions = p.acts;
    shim.observations = p.obs;
    if (!sem.denotations.at(spec.spoken_utterance)(w, shim)) continue;
    if (!realized || p.prob > realized->prob) realized = &p;
  }
  if (!realized) throw std::runtime_error("oracle: no sincere realization");

  auto value_at_final = [&](const Path& p, const std::string& var) {
    return w.state_value(p.states.back(), var);
  };
  auto marginal_mass = [&](const std::vector<double>& wts, const std::string& var,
                           const std::string& val) {
    double m = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) {
      if (wts[i] > 0.0 && value_at_final(prior[i], var) == val) m += wts[i];
    }
    return m;
  };
  auto modify_mass = [&](const std::vector<double>& wts) {
    double m = 0.0;
    int midx = w.action_index(L, "modify");
    for (std::size_t i = 0; i < prior.size(); ++i) {
      if (wts[i] > 0.0 && prior[i].acts[0].actions[L] == midx) m += wts[i];
    }
    return m;
  };

  const std::string& info_var = spec.perception_variable;
  const std::string& eval_var = spec.ability_variable;
  const std::string eval_target = "high";

  std::vector<double> before_L = posterior(w, prior, L, project(*realized, L, 1), sem);
  std::vector<double> after_L = posterior(w, prior, L, project(*realized, L, 2), sem);
  std::string x_info = value_at_final(*realized, info_var);
  double d_info = marginal_mass(after_L, info_var, x_info) -
                  marginal_mass(before_L, info_var, x_info);
  double d_eval = marginal_mass(after_L, eval_var, eval_target) -
                  marginal_mass(before_L, eval_var, eval_target);

  // Expected belief shifts for a speaker whose information is the given
  // observation prefix; used for the speaker herself, for the listener's
  // model of her, and inside the policy.
  auto shifts_for = [&](const std::vector<double>& speaker_wts, const std::string& utterance) {
    double e_info = 0.0, e_eval = 0.0;
    for (std::size_t i = 0; i < prior.size(); ++i) {
      if (speaker_wts[i] <= 0.0) continue;
      const Path& h = prior[i];
      std::vector<Observation> lis_before = project(h, L, 1);
      std::vector<double> wb = posterior(w, prior, L, lis_before, sem);
      JointAction a = h.acts[1];
      a.actions[S] = w.action_index(S, utterance);
      auto outcomes = sole_rule(w, h.states[1], a).outcomes(w, h.states[1], a);
      if (outcomes.size() != 1) throw std::runtime_error("oracle: stochastic utterance step");
      std::vector<Observation> lis_after = lis_before;
      lis_after.push_back(outcomes.support().front().first.second.per_agent[L]);
      std::vector<double> wa = posterior(w, prior, L, lis_after, sem);
      std::string true_info = value_at_final(h, info_var);
      e_info += speaker_wts[i] * (marginal_mass(wa, info_var, true_info) -
                                  marginal_mass(wb, info_var, true_info));
      e_eval += speaker_wts[i] * (marginal_mass(wa, eval_var, eval_target) -
                                  marginal_mass(wb, eval_var, eval_target));
    }
    return std::pair<double, double>{e_info, e_eval};
  };

  std::vector<double> speaker_wts = posterior(w, prior, S, project(*realized, S, 1), sem);
  auto [sed_info, sed_eval] = shifts_for(speaker_wts, spec.spoken_utterance);
  double knew = modify_mass(speaker_wts);

  double led = 0.0, lek = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (after_L[i] <= 0.0) continue;
    std::vector<double> nested = posterior(w, prior, S, project(prior[i], S, 1), sem);
    led += after_L[i] * shifts_for(nested, spec.spoken_utterance).second;
    lek += after_L[i] * modify_mass(nested);
  }

  auto policy_mass = [&](const std::vector<double>& nested, const SpeakerHypothesis& hyp,
                         const std::string& chosen) {
    std::vector<double> vals;
    double vmax = -1e300;
    for (const auto& u : spec.utterances) {
      auto [ei, ee] = shifts_for(nested, u.text);
      double val = hyp.params.theta_info * ei + hyp.params.theta_eval * ee;
      vals.push_back(val);
      if (val > vmax) vmax = val;
    }
    double z = 0.0, picked = 0.0;
    for (std::size_t k = 0; k < spec.utterances.size(); ++k) {
      double e = std::exp(hyp.params.rationality * (vals[k] - vmax));
      z += e;
      if (spec.utterances[k].text == chosen) picked = e;
    }
    return picked / z;
  };

  double harm_mass = 0.0, joint_total = 0.0;
  int spoken_idx = w.action_index(S, spec.spoken_utterance);
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (before_L[i] <= 0.0 || prior[i].acts[1].actions[S] != spoken_idx) continue;
    std::vector<double> nested = posterior(w, prior, S, project(prior[i], S, 1), sem);
    for (const auto& hyp : hyps) {
      double mass = before_L[i] * hyp.prior * policy_mass(nested, hyp, spec.spoken_utterance);
      joint_total += mass;
      if (hyp.params.theta_eval < 0.0) harm_mass += mass;
    }
  }
  if (joint_total <= 0.0) throw std::runtime_error("oracle: zero sophisticated posterior");

  return {
      {"delta_info", d_info},
      {"delta_eval", d_eval},
      {"speaker_expected_delta_info", sed_info},
      {"speaker_expected_delta_eval", sed_eval},
      {"listener_expected_speaker_expected_delta_eval", led},
      {"listener_belief_speaker_wanted_harm", harm_mass / joint_total},
      {"speaker_knew_modification", knew},
      {"listener_expected_speaker_knew_modification", lek},
  };
}

}  // namespace fauxpas::oracle
