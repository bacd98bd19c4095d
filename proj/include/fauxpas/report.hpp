#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fauxpas/belief.hpp"
#include "fauxpas/listener.hpp"
#include "fauxpas/scenario.hpp"
#include "fauxpas/speaker.hpp"

namespace fauxpas {

/// Band around zero used to classify belief shifts when raising the
/// faux pas / expected insult flags.
inline constexpr double kClassificationTolerance = 1e-6;

/// The model's answers for one variant. All belief-shift fields refer to the
/// listener's evaluative or informative variable and are caused by the spoken
/// utterance; "speaker_expected" fields average the shift under the speaker's
/// belief at speaking time; "listener_expected" fields average a nested
/// reconstruction of the speaker under the listener's belief after hearing.
struct PredictionProfile {
  std::string scenario;
  std::string variant;
  double delta_info = 0.0;
  double delta_eval = 0.0;
  double speaker_expected_delta_info = 0.0;
  double speaker_expected_delta_eval = 0.0;
  double listener_expected_speaker_expected_delta_eval = 0.0;
  double listener_belief_speaker_wanted_harm = 0.0;
  double speaker_knew_modification = 0.0;
  double listener_expected_speaker_knew_modification = 0.0;
  bool faux_pas = false;
  bool expected_insult = false;
};

struct ProfileField {
  const char* name;
  double PredictionProfile::*member;
};

inline const std::array<ProfileField, 8>& profile_fields() {
  static const std::array<ProfileField, 8> fields = {{
      {"delta_info", &PredictionProfile::delta_info},
      {"delta_eval", &PredictionProfile::delta_eval},
      {"speaker_expected_delta_info", &PredictionProfile::speaker_expected_delta_info},
      {"speaker_expected_delta_eval", &PredictionProfile::speaker_expected_delta_eval},
      {"listener_expected_speaker_expected_delta_eval",
       &PredictionProfile::listener_expected_speaker_expected_delta_eval},
      {"listener_belief_speaker_wanted_harm",
       &PredictionProfile::listener_belief_speaker_wanted_harm},
      {"speaker_knew_modification", &PredictionProfile::speaker_knew_modification},
      {"listener_expected_speaker_knew_modification",
       &PredictionProfile::listener_expected_speaker_knew_modification},
  }};
  return fields;
}

/// How the profile fields line up with the questionnaire a study of these
/// scenarios would ask. Stable documentation, emitted with every report.
inline const std::vector<std::pair<std::string, std::string>>& question_analogues() {
  static const std::vector<std::pair<std::string, std::string>> map = {
      {"did the utterance hurt", "delta_eval"},
      {"did the speaker expect it to hurt", "speaker_expected_delta_eval"},
      {"does the listener think the speaker expected it to hurt",
       "listener_expected_speaker_expected_delta_eval"},
      {"did the speaker want to hurt", "listener_belief_speaker_wanted_harm"},
      {"did the speaker know about the modification", "speaker_knew_modification"},
      {"does the listener think the speaker knew",
       "listener_expected_speaker_knew_modification"},
  };
  return map;
}

struct ProfileOptions {
  std::size_t history_cap = kDefaultHistoryCap;
  double classification_tolerance = kClassificationTolerance;
};

inline void classify(PredictionProfile& p, double tol) {
  bool hurt = p.delta_eval < -tol;
  p.faux_pas = hurt && std::abs(p.speaker_expected_delta_eval) < tol;
  p.expected_insult = hurt && p.speaker_expected_delta_eval < -tol;
}

/// Runs one variant end to end and fills every profile field.
///
/// Timeline: beliefs start from the variant's common-ground prior (only the
/// speaker's entry is pinned). The utterance is spoken at step 1, so the
/// listener's "before" belief conditions on the first observation and the
/// "after" belief additionally on the second, which carries the utterance.
/// The speaker decides knowing her own first observation.
inline PredictionProfile prediction_profile(const ScenarioSpec& spec, HistoryVariant variant,
                                            const SpeakerParams& params,
                                            const std::vector<SpeakerHypothesis>& hypotheses,
                                            const ProfileOptions& opts = {}) {
  validate_spec(spec);
  validate_params(params);
  validate_hypotheses(hypotheses);

  WorldModel w = build_world(spec);
  UtteranceSemantics sem = build_semantics(spec);
  std::size_t listener = w.agent_index(spec.listener_label);
  std::size_t speaker = w.agent_index(spec.speaker_label);

  BeliefState prior =
      prior_belief(w, listener, spec.horizon, belief_script(spec, w, variant), opts.history_cap);
  History realized = realized_history(spec, w, sem, variant, opts.history_cap);

  auto z_listener = observation_sequence(realized, listener);
  auto z_speaker = observation_sequence(realized, speaker);

  BeliefState before = condition(w, prior, {z_listener[0]}, &sem);
  BeliefState after = condition(w, before, {z_listener[1]}, &sem);

  PredictionProfile p;
  p.scenario = spec.name;
  p.variant = variant_name(variant);

  QueryVariable info = params.info_variable;
  QueryVariable eval = params.eval_variable;
  std::string true_info = info.extract(w, realized);
  p.delta_info = delta_info(w, before, after, info, true_info);
  p.delta_eval = delta_eval(w, before, after, eval, params.eval_target);

  BeliefState speaker_belief = condition(w, reowned(prior, speaker), {z_speaker[0]}, &sem);
  SpeakerValue sv = speaker_value(w, speaker_belief, spec.spoken_utterance, params, sem, prior);
  p.speaker_expected_delta_info = sv.expected_delta_info;
  p.speaker_expected_delta_eval = sv.expected_delta_eval;

  QueryVariable modified = action_taken(spec.listener_label, 0, "modify");
  p.speaker_knew_modification = marginal(w, speaker_belief, modified).mass("yes");

  // The listener's reconstruction of the speaker, averaged over the
  // listener's post-utterance belief. Each hypothesis fixes the speaker's
  // observation prefix, hence her simulated belief and expected shift.
  double led = 0.0;
  for (const auto& [h, mass] : after.dist.support()) {
    auto seq = observation_sequence(h, speaker);
    seq.resize(1);
    BeliefState nested = condition(w, reowned(prior, speaker), seq, &sem);
    led += mass * speaker_value(w, nested, spec.spoken_utterance, params, sem, prior)
                      .expected_delta_eval;
  }
  p.listener_expected_speaker_expected_delta_eval = led;

  Dist<double> nested_knowledge =
      other_agent_belief(w, after, speaker, modified, "yes", prior, &sem, 1);
  p.listener_expected_speaker_knew_modification =
      nested_knowledge.expectation([](const double& v) { return v; });

  SophisticatedPosterior soph = sophisticated_listener(
      w, before, spec.spoken_utterance, hypotheses, sem, utterance_texts(spec), prior);
  double harm = 0.0;
  for (std::size_t k = 0; k < soph.hypotheses.size(); ++k) {
    if (soph.hypotheses[k].params.theta_eval < 0.0) harm += soph.hypothesis_mass(k);
  }
  p.listener_belief_speaker_wanted_harm = harm;

  classify(p, opts.classification_tolerance);
  return p;
}

inline PredictionProfile prediction_profile(const ScenarioSpec& spec, HistoryVariant variant,
                                            const ProfileOptions& opts = {}) {
  return prediction_profile(spec, variant, default_speaker_params(spec),
                            default_hypotheses(spec), opts);
}

/// Both variants of one scenario plus per-field contrasts (shared minus
/// diverging) and the signature each variant exhibits.
struct VariantComparison {
  PredictionProfile shared;
  PredictionProfile diverging;
  std::vector<std::pair<std::string, double>> contrasts;
};

inline const char* signature_label(const PredictionProfile& p) {
  if (p.faux_pas) return "faux pas";
  if (p.expected_insult) return "expected insult";
  return "neither";
}

inline VariantComparison compare_variants(const ScenarioSpec& spec, const SpeakerParams& params,
                                          const std::vector<SpeakerHypothesis>& hypotheses,
                                          const ProfileOptions& opts = {},
                                          HistoryVariant first = HistoryVariant::shared,
                                          HistoryVariant second = HistoryVariant::diverging) {
  VariantComparison c;
  c.shared = prediction_profile(spec, first, params, hypotheses, opts);
  c.diverging = prediction_profile(spec, second, params, hypotheses, opts);
  for (const auto& f : profile_fields()) {
    c.contrasts.emplace_back(f.name, c.shared.*(f.member) - c.diverging.*(f.member));
  }
  return c;
}

inline VariantComparison compare_variants(const ScenarioSpec& spec,
                                          const ProfileOptions& opts = {}) {
  return compare_variants(spec, default_speaker_params(spec), default_hypotheses(spec), opts);
}

// --- rendering ---------------------------------------------------------------

/// Canonical number rendering, shared verbatim by the structured, table, and
/// CSV formats: the shortest decimal string that parses back to the same
/// double.
inline std::string format_number(double v) { return nlohmann::json(v).dump(); }

inline nlohmann::json emit_profile(const PredictionProfile& p) {
  nlohmann::json j{{"scenario", p.scenario}, {"variant", p.variant}};
  for (const auto& f : profile_fields()) j[f.name] = p.*(f.member);
  j["faux_pas"] = p.faux_pas;
  j["expected_insult"] = p.expected_insult;
  return j;
}

inline PredictionProfile parse_profile(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("profile record must be an object");
  PredictionProfile p;
  std::vector<std::string> known = {"scenario", "variant", "faux_pas", "expected_insult"};
  for (const auto& f : profile_fields()) known.push_back(f.name);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok |= (k == key);
    if (!ok) throw UnknownKeyError("profile." + key);
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) throw SpecError(std::string("profile record missing ") + key);
    return *it;
  };
  p.scenario = need("scenario").get<std::string>();
  p.variant = need("variant").get<std::string>();
  for (const auto& f : profile_fields()) p.*(f.member) = need(f.name).get<double>();
  p.faux_pas = need("faux_pas").get<bool>();
  p.expected_insult = need("expected_insult").get<bool>();
  return p;
}

inline nlohmann::json emit_comparison(const VariantComparison& c) {
  nlohmann::json contrasts;
  for (const auto& [name, v] : c.contrasts) contrasts[name] = v;
  nlohmann::json analogues;
  for (const auto& [q, field] : question_analogues()) analogues[q] = field;
  return nlohmann::json{{"shared", emit_profile(c.shared)},
                        {"diverging", emit_profile(c.diverging)},
                        {"contrasts", std::move(contrasts)},
                        {"signatures",
                         {{"shared", signature_label(c.shared)},
                          {"diverging", signature_label(c.diverging)}}},
                        {"question_analogues", std::move(analogues)}};
}

inline VariantComparison parse_comparison(const nlohmann::json& j) {
  VariantComparison c;
  c.shared = parse_profile(j.at("shared"));
  c.diverging = parse_profile(j.at("diverging"));
  for (const auto& f : profile_fields()) {
    c.contrasts.emplace_back(f.name, j.at("contrasts").at(f.name).get<double>());
  }
  return c;
}

inline std::string render_table(const std::vector<PredictionProfile>& profiles) {
  std::size_t label_width = 0;
  for (const auto& f : profile_fields()) {
    label_width = std::max(label_width, std::string(f.name).size());
  }
  std::vector<std::vector<std::string>> columns;
  for (const auto& p : profiles) {
    std::vector<std::string> col = {p.scenario + "/" + p.variant};
    for (const auto& f : profile_fields()) col.push_back(format_number(p.*(f.member)));
    col.push_back(p.faux_pas ? "yes" : "no");
    col.push_back(p.expected_insult ? "yes" : "no");
    col.push_back(signature_label(p));
    columns.push_back(std::move(col));
  }
  std::vector<std::string> rows = {"field"};
  for (const auto& f : profile_fields()) rows.push_back(f.name);
  rows.push_back("faux_pas");
  rows.push_back("expected_insult");
  rows.push_back("signature");

  std::vector<std::size_t> widths;
  for (const auto& col : columns) {
    std::size_t wd = 0;
    for (const auto& cell : col) wd = std::max(wd, cell.size());
    widths.push_back(wd);
  }
  std::size_t w0 = 0;
  for (const auto& r : rows) w0 = std::max(w0, r.size());

  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line = rows[r];
    line.resize(w0, ' ');
    for (std::size_t c = 0; c < columns.size(); ++c) {
      line += "  ";
      std::string cell = columns[c][r];
      line += std::string(widths[c] > cell.size() ? widths[c] - cell.size() : 0, ' ') + cell;
    }
    out += line + "\n";
  }
  return out;
}

inline std::string render_contrast_table(const VariantComparison& c) {
  std::string out = render_table({c.shared, c.diverging});
  out += "\ncontrasts (shared - diverging)\n";
  std::size_t w0 = 0;
  for (const auto& [name, v] : c.contrasts) {
    (void)v;
    w0 = std::max(w0, name.size());
  }
  for (const auto& [name, v] : c.contrasts) {
    std::string line = name;
    line.resize(w0, ' ');
    out += line + "  " + format_number(v) + "\n";
  }
  out += "\nquestion analogues\n";
  for (const auto& [q, field] : question_analogues()) {
    out += "  " + q + " -> " + field + "\n";
  }
  return out;
}

inline std::string render_csv(const std::vector<PredictionProfile>& profiles) {
  std::string out = "scenario,variant,field,value\n";
  for (const auto& p : profiles) {
    for (const auto& f : profile_fields()) {
      out += p.scenario + "," + p.variant + "," + f.name + "," + format_number(p.*(f.member)) +
             "\n";
    }
    out += p.scenario + "," + p.variant + ",faux_pas," + (p.faux_pas ? "true" : "false") + "\n";
    out += p.scenario + "," + p.variant + ",expected_insult," +
           (p.expected_insult ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace fauxpas
