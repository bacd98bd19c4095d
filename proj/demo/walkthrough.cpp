// Walks the bundled curtain episode end to end and prints what each layer of
// the model concludes: the listener's belief shift, the speaker's utterance
// values and policy, and the listener's joint inference about world and
// intent. Build target: walkthrough.

#include <iostream>

#include "fauxpas/fauxpas.hpp"

using namespace fauxpas;

namespace {

void show_variant(const ScenarioSpec& spec, HistoryVariant variant) {
  WorldModel w = build_world(spec);
  UtteranceSemantics sem = build_semantics(spec);
  std::size_t listener = w.agent_index(spec.listener_label);
  std::size_t speaker = w.agent_index(spec.speaker_label);

  std::cout << "\n=== " << variant_name(variant) << " variant ===\n";
  History realized = realized_history(spec, w, sem, variant);
  std::cout << "what actually happens:\n";
  for (int t = 0; t < realized.horizon(); ++t) {
    auto tu = static_cast<std::size_t>(t);
    std::cout << "  step " << t << ": " << w.describe(realized.actions[tu]) << " -> "
              << w.describe(realized.states[tu + 1]) << "\n";
  }

  BeliefState prior =
      prior_belief(w, listener, spec.horizon, belief_script(spec, w, variant));
  auto z_listener = observation_sequence(realized, listener);
  BeliefState before = condition(w, prior, {z_listener[0]}, &sem);
  BeliefState after = condition(w, before, {z_listener[1]}, &sem);
  QueryVariable ability = state_value_at(spec.ability_variable, 0);
  std::cout << spec.listener_label << "'s belief in his own high ability: "
            << format_number(marginal(w, before, ability).mass("high")) << " before, "
            << format_number(marginal(w, after, ability).mass("high")) << " after hearing '"
            << spec.spoken_utterance << "'\n";

  SpeakerParams params = default_speaker_params(spec);
  auto z_speaker = observation_sequence(realized, speaker);
  BeliefState speaker_belief =
      condition(w, reowned(prior, speaker), {z_speaker[0]}, &sem);
  std::cout << spec.speaker_label << "'s expected belief shifts per utterance "
            << "(informative, evaluative):\n";
  std::vector<std::pair<std::string, double>> values;
  for (const auto& u : utterance_texts(spec)) {
    SpeakerValue v = speaker_value(w, speaker_belief, u, params, sem, prior);
    values.emplace_back(u, v.value);
    std::cout << "  " << u << ": " << format_number(v.expected_delta_info) << ", "
              << format_number(v.expected_delta_eval) << "\n";
  }
  Dist<std::string> policy = luce_choice(values, params.rationality);
  std::cout << "her choice probabilities:\n";
  for (const auto& [u, p] : policy.support()) {
    std::cout << "  " << u << ": " << format_number(p) << "\n";
  }

  SophisticatedPosterior soph = sophisticated_listener(
      w, before, spec.spoken_utterance, default_hypotheses(spec), sem,
      utterance_texts(spec), prior);
  std::cout << spec.listener_label << "'s posterior that " << spec.speaker_label
            << " wanted to hurt: " << format_number(soph.hypothesis_mass("harmful")) << "\n";
}

}  // namespace

int main() {
  ScenarioSpec spec;
  std::cout << "The " << spec.name << " episode: " << spec.listener_label
            << " privately modifies the " << spec.object_label << "; " << spec.speaker_label
            << " walks in and says '" << spec.spoken_utterance << "'.\n";
  std::cout << "In the shared variant she watched him do it; in the diverging variant\n"
            << "she arrived afterwards and only saw the result.\n";

  show_variant(spec, HistoryVariant::shared);
  show_variant(spec, HistoryVariant::diverging);

  std::cout << "\n=== side by side ===\n";
  VariantComparison c = compare_variants(spec);
  std::cout << render_contrast_table(c);
  std::cout << "\nWith a wider classification band the diverging variant reads as a faux pas:\n";
  ProfileOptions opts;
  opts.classification_tolerance = 0.01;
  PredictionProfile relaxed = prediction_profile(spec, HistoryVariant::diverging, opts);
  std::cout << "  tolerance 0.01 -> " << signature_label(relaxed) << "\n";
  return 0;
}
