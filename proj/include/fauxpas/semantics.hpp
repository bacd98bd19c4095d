#pragma once

#include <functional>
#include <map>
#include <string>

#include "fauxpas/errors.hpp"
#include "fauxpas/history.hpp"

namespace fauxpas {

/// Truth-functional meaning of an utterance: a predicate over full histories.
using Denotation = std::function<bool(const WorldModel&, const History&)>;

/// Registered denotations plus the semantic noise rate. A heard utterance is
/// treated as true of the actual history with probability 1 - epsilon.
struct UtteranceSemantics {
  double epsilon = 0.05;
  std::map<std::string, Denotation> denotations;

  bool defines(const std::string& utterance) const {
    return denotations.find(utterance) != denotations.end();
  }
};

/// Evaluates an utterance's denotation on a history.
inline bool evaluate_denotation(const std::string& utterance, const UtteranceSemantics& sem,
                                const WorldModel& w, const History& h) {
  auto it = sem.denotations.find(utterance);
  if (it == sem.denotations.end()) throw UndefinedSemanticsError(utterance);
  return it->second(w, h);
}

/// Likelihood of hearing `utterance` given that `h` is the actual history,
/// under the literal semantic model: (1 - epsilon) if the denotation holds
/// on h, epsilon otherwise.
inline double literal_utterance_likelihood(const std::string& utterance,
                                           const UtteranceSemantics& sem, const WorldModel& w,
                                           const History& h) {
  return evaluate_denotation(utterance, sem, w, h) ? (1.0 - sem.epsilon) : sem.epsilon;
}

}  // namespace fauxpas
