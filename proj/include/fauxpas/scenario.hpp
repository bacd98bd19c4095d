#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fauxpas/belief.hpp"
#include "fauxpas/errors.hpp"
#include "fauxpas/history.hpp"
#include "fauxpas/listener.hpp"
#include "fauxpas/semantics.hpp"
#include "fauxpas/speaker.hpp"
#include "fauxpas/world.hpp"

namespace fauxpas {

/// The two ways the interaction can unfold: in the shared variant the speaker
/// is present from the start and sees everything the listener does; in the
/// diverging variant the speaker arrives only after the listener has acted.
enum class HistoryVariant { shared, diverging };

inline const char* variant_name(HistoryVariant v) {
  return v == HistoryVariant::shared ? "shared" : "diverging";
}

inline HistoryVariant parse_variant(const std::string& s) {
  if (s == "shared") return HistoryVariant::shared;
  if (s == "diverging") return HistoryVariant::diverging;
  throw SpecError("unknown variant: " + s + " (expected shared or diverging)");
}

/// One declared utterance: its surface text and what it asserts. A vacuous
/// utterance (saying nothing) asserts nothing and is true everywhere.
struct UtteranceSpec {
  std::string text;
  bool vacuous = false;
  std::string asserts_variable;
  std::string asserts_value;
};

/// Declarative description of one two-agent episode: who is involved, the
/// latent variables and their priors, the utterance inventory, and the two
/// history variants. All scenario presets share this structure and differ
/// only in labels.
struct ScenarioSpec {
  std::string name = "curtain";
  std::string listener_label = "Paul";
  std::string speaker_label = "Lisa";
  std::string listener_location = "inside";
  std::string object_label = "curtains";
  std::string object_location = "inside";
  bool object_modified = false;
  std::string ability_variable = "ability";
  std::string perception_variable = "perception";
  double ability_high_prior = 0.90;
  double perception_good_prior = 0.50;
  double modify_prior = 0.05;
  std::vector<UtteranceSpec> utterances = {
      {"looks good", false, "perception", "good"},
      {"looks bad", false, "perception", "bad"},
      {"<nothing>", true, "", ""},
  };
  std::string spoken_utterance = "looks bad";
  std::string shared_entry = "arrive_early";
  std::string diverging_entry = "arrive_late";
  double epsilon = 0.05;
  int horizon = 2;
};

inline void validate_spec(const ScenarioSpec& spec) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(spec.ability_high_prior) || !in_unit(spec.perception_good_prior) ||
      !in_unit(spec.modify_prior)) {
    throw SpecError("priors must lie in [0, 1]");
  }
  if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0)) {
    throw SpecError("epsilon must lie strictly between 0 and 1");
  }
  if (spec.listener_label.empty() || spec.speaker_label.empty()) {
    throw SpecError("agent labels must be nonempty");
  }
  if (spec.listener_label == spec.speaker_label) {
    throw SpecError("agent labels must differ");
  }
  if (spec.object_location != spec.listener_location) {
    throw SpecError("the object must be at the listener's location");
  }
  if (spec.utterances.size() < 2) throw SpecError("at least two utterances required");
  std::size_t vacuous_count = 0;
  for (const auto& u : spec.utterances) {
    if (u.text.empty()) throw SpecError("utterance text must be nonempty");
    if (u.vacuous) {
      ++vacuous_count;
    } else if (u.asserts_variable != spec.perception_variable) {
      throw SpecError("utterance '" + u.text + "' must assert the perception variable");
    } else if (u.asserts_value != "good" && u.asserts_value != "bad") {
      throw SpecError("utterance '" + u.text + "' asserts a value outside {good, bad}");
    }
    for (const auto& v : spec.utterances) {
      if (&u != &v && u.text == v.text) throw SpecError("duplicate utterance: " + u.text);
    }
  }
  if (vacuous_count != 1) throw SpecError("exactly one vacuous utterance required");
  bool spoken_known = false;
  for (const auto& u : spec.utterances) spoken_known |= (u.text == spec.spoken_utterance);
  if (!spoken_known) {
    throw SpecError("spoken utterance '" + spec.spoken_utterance + "' is not declared");
  }
  if (spec.ability_variable.empty() || spec.perception_variable.empty() ||
      spec.ability_variable == spec.perception_variable) {
    throw SpecError("ability and perception variables must be distinct and named");
  }
  // The variant scripts pin actions at steps 0 and 1, so shorter horizons
  // would reference steps past the end.
  if (spec.horizon < 2) {
    throw SpecError("horizon must be at least 2: variant scripts reference steps 0 and 1");
  }
}

inline std::vector<std::string> utterance_texts(const ScenarioSpec& spec) {
  std::vector<std::string> out;
  out.reserve(spec.utterances.size());
  for (const auto& u : spec.utterances) out.push_back(u.text);
  return out;
}

inline const UtteranceSpec& vacuous_utterance(const ScenarioSpec& spec) {
  for (const auto& u : spec.utterances) {
    if (u.vacuous) return u;
  }
  throw SpecError("no vacuous utterance declared");
}

/// Assembles the playable world. The listener stays with the object and may
/// privately modify it at step 0; the modification deterministically rewrites
/// the speaker's eventual perception (a high-ability modification looks good,
/// a low-ability one looks bad). The speaker starts outside and enters either
/// during step 0 (arrive_early, witnessing the listener's move) or at its end
/// (arrive_late, seeing only the result). Entry actions are private to the
/// speaker; utterances are heard by a co-located listener; each agent always
/// perceives its own action.
inline WorldModel build_world(const ScenarioSpec& spec) {
  validate_spec(spec);
  WorldModel w;
  w.variables = {
      {spec.ability_variable, {"high", "low"}},
      {spec.perception_variable, {"good", "bad"}},
      {"modified", {"no", "yes"}},
      {"speaker_location", {"outside", spec.listener_location}},
  };
  w.agents = {{0, spec.listener_label}, {1, spec.speaker_label}};

  std::vector<ActionDecl> listener_actions = {{"wait", ActionKind::noop},
                                              {"modify", ActionKind::physical}};
  std::vector<ActionDecl> speaker_actions = {{"arrive_early", ActionKind::physical},
                                             {"arrive_late", ActionKind::physical}};
  for (const auto& u : spec.utterances) {
    speaker_actions.push_back({u.text, u.vacuous ? ActionKind::noop : ActionKind::utterance});
  }
  w.actions = {listener_actions, speaker_actions};

  std::vector<Dist<std::string>::Entry> speech_prior;
  for (const auto& u : spec.utterances) {
    speech_prior.emplace_back(u.text, 1.0);
  }
  w.action_priors = {
      {Dist<std::string>::from_weights(
           {{"modify", spec.modify_prior}, {"wait", 1.0 - spec.modify_prior}}),
       Dist<std::string>::point("wait")},
      {Dist<std::string>::from_weights({{"arrive_early", 0.5}, {"arrive_late", 0.5}}),
       Dist<std::string>::from_weights(std::move(speech_prior)),
       Dist<std::string>::point(vacuous_utterance(spec).text)},
  };

  std::vector<Dist<State>::Entry> inits;
  for (const auto& [ab, pa] : std::vector<std::pair<std::string, double>>{
           {"high", spec.ability_high_prior}, {"low", 1.0 - spec.ability_high_prior}}) {
    for (const auto& [pc, pp] : std::vector<std::pair<std::string, double>>{
             {"good", spec.perception_good_prior}, {"bad", 1.0 - spec.perception_good_prior}}) {
      if (pa * pp <= 0.0) continue;
      inits.emplace_back(w.make_state({{spec.ability_variable, ab},
                                       {spec.perception_variable, pc},
                                       {"modified", spec.object_modified ? "yes" : "no"},
                                       {"speaker_location", "outside"}}),
                         pa * pp);
    }
  }
  w.initial_states = Dist<State>::from_weights(std::move(inits));

  std::string ability_var = spec.ability_variable;
  std::string perception_var = spec.perception_variable;
  std::string inside = spec.listener_location;
  std::string listener_label = spec.listener_label;
  std::string speaker_label = spec.speaker_label;

  auto step = [ability_var, perception_var, inside, listener_label, speaker_label](
                  const WorldModel& world, const State& s, const JointAction& a)
      -> Dist<std::pair<State, JointObservation>> {
    const ActionDecl& al = world.action_decl(0, a.actions[0]);
    const ActionDecl& as = world.action_decl(1, a.actions[1]);
    State next = s;
    if (al.name == "modify") {
      next = world.with_value(next, "modified", "yes");
      next = world.with_value(
          next, perception_var,
          world.state_value(s, ability_var) == "high" ? "good" : "bad");
    }
    bool was_inside = world.state_value(s, "speaker_location") == inside;
    bool enters = as.name == "arrive_early" || as.name == "arrive_late";
    if (enters) next = world.with_value(next, "speaker_location", inside);
    bool present_during = was_inside || as.name == "arrive_early";
    bool present_after = world.state_value(next, "speaker_location") == inside;
    bool first_sight = !was_inside && present_after;
    bool modified_changed =
        world.state_value(next, "modified") != world.state_value(s, "modified");
    bool perception_changed =
        world.state_value(next, perception_var) != world.state_value(s, perception_var);

    std::vector<Percept> zl = {{Percept::Kind::action, listener_label, al.name}};
    if (as.kind == ActionKind::utterance && was_inside) {
      zl.push_back({Percept::Kind::action, speaker_label, as.name});
    }
    if (modified_changed) {
      zl.push_back({Percept::Kind::variable, "modified", world.state_value(next, "modified")});
    }

    std::vector<Percept> zs = {{Percept::Kind::action, speaker_label, as.name}};
    if (al.kind == ActionKind::physical && present_during) {
      zs.push_back({Percept::Kind::action, listener_label, al.name});
    }
    if (modified_changed && present_during) {
      zs.push_back({Percept::Kind::variable, "modified", world.state_value(next, "modified")});
    }
    if (present_after && (first_sight || perception_changed)) {
      zs.push_back(
          {Percept::Kind::variable, perception_var, world.state_value(next, perception_var)});
    }

    JointObservation z{{Observation::of(std::move(zl)), Observation::of(std::move(zs))}};
    return Dist<std::pair<State, JointObservation>>::point({next, z});
  };

  w.rules = {{"episode step",
              [](const WorldModel&, const State&, const JointAction&) { return true; }, step}};
  validate_world(w);
  return w;
}

/// Literal meanings for the declared utterances, evaluated on the history's
/// final state.
inline UtteranceSemantics build_semantics(const ScenarioSpec& spec) {
  UtteranceSemantics sem;
  sem.epsilon = spec.epsilon;
  for (const auto& u : spec.utterances) {
    if (u.vacuous) {
      sem.denotations[u.text] = [](const WorldModel&, const History&) { return true; };
    } else {
      std::string var = u.asserts_variable;
      std::string val = u.asserts_value;
      sem.denotations[u.text] = [var, val](const WorldModel& w, const History& h) {
        return w.state_value(h.final_state(), var) == val;
      };
    }
  }
  return sem;
}

/// The fully pinned course of events for a variant: the listener modifies the
/// object at step 0 and waits; the speaker enters per the variant and speaks
/// the scenario's utterance at step 1.
inline Script script_variant(const ScenarioSpec& spec, const WorldModel& w, HistoryVariant v) {
  Script script;
  script.pin(0, w.agent_index(spec.listener_label), "modify");
  script.pin(0, w.agent_index(spec.speaker_label),
             v == HistoryVariant::shared ? spec.shared_entry : spec.diverging_entry);
  script.pin(1, w.agent_index(spec.listener_label), "wait");
  script.pin(1, w.agent_index(spec.speaker_label), spec.spoken_utterance);
  return script;
}

/// The part of the variant that is common ground before anything happens:
/// both agents know when the speaker arrives, nothing else. Belief priors
/// enumerate under this script, leaving the listener's choice and the
/// utterance open.
inline Script belief_script(const ScenarioSpec& spec, const WorldModel& w, HistoryVariant v) {
  Script script;
  script.pin(0, w.agent_index(spec.speaker_label),
             v == HistoryVariant::shared ? spec.shared_entry : spec.diverging_entry);
  return script;
}

/// The realized history of a variant: among the fully scripted unfoldings,
/// the heaviest one on which the spoken utterance is true (the speaker is
/// sincere). Ties resolve to enumeration order.
inline History realized_history(const ScenarioSpec& spec, const WorldModel& w,
                                const UtteranceSemantics& sem, HistoryVariant v,
                                std::size_t cap = kDefaultHistoryCap) {
  auto hists = enumerate_histories(w, spec.horizon, script_variant(spec, w, v), cap);
  const History* best = nullptr;
  for (const auto& h : hists) {
    if (!evaluate_denotation(spec.spoken_utterance, sem, w, h)) continue;
    if (!best || h.weight > best->weight) best = &h;
  }
  if (!best) throw SpecError("no sincere realization of the spoken utterance exists");
  return *best;
}

/// Query for the informative variable: the speaker's current perception.
inline QueryVariable info_query(const ScenarioSpec& spec) {
  return state_value_at(spec.perception_variable);
}

/// Query for the evaluative variable: the listener's ability.
inline QueryVariable eval_query(const ScenarioSpec& spec) {
  return state_value_at(spec.ability_variable);
}

inline SpeakerParams default_speaker_params(const ScenarioSpec& spec) {
  SpeakerParams p;
  p.theta_info = 1.0;
  p.theta_eval = 0.0;
  p.rationality = 3.0;
  p.info_variable = info_query(spec);
  p.eval_variable = eval_query(spec);
  p.eval_target = "high";
  return p;
}

/// Default listener hypotheses about the speaker: probably benign (cares only
/// about informing), possibly harmful (also values the listener looking bad).
inline std::vector<SpeakerHypothesis> default_hypotheses(const ScenarioSpec& spec) {
  SpeakerHypothesis benign{"benign", 0.9, default_speaker_params(spec)};
  SpeakerHypothesis harmful{"harmful", 0.1, default_speaker_params(spec)};
  harmful.params.theta_eval = -1.0;
  return {benign, harmful};
}

inline std::vector<ScenarioSpec> bundled_presets() {
  auto skin = [](std::string name, std::string listener, std::string speaker,
                 std::string object) {
    ScenarioSpec s;
    s.name = std::move(name);
    s.listener_label = std::move(listener);
    s.speaker_label = std::move(speaker);
    s.object_label = std::move(object);
    return s;
  };
  return {
      skin("curtain", "Paul", "Lisa", "curtains"),
      skin("story-prize", "Joe", "Robert", "story"),
      skin("wine-bottle", "Tom", "Anna", "wine"),
      skin("cupcakes", "Mia", "Noah", "cupcakes"),
      skin("parking", "Sam", "Erin", "parking job"),
  };
}

inline std::optional<ScenarioSpec> find_preset(const std::string& name) {
  std::string wanted = name == "curtains" ? "curtain" : name;
  for (auto& s : bundled_presets()) {
    if (s.name == wanted) return s;
  }
  return std::nullopt;
}

// --- scenario document format -----------------------------------------------
//
// Scenarios are JSON documents. Every key is optional and defaults to the
// curtain preset's value; unknown keys are rejected with their full path.
// serialize_spec emits a canonical form (sorted keys, two-space indent) so
// that serialize(parse(serialize(x))) == serialize(x) byte for byte.

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw SpecError((path.empty() ? std::string("document") : path) + " must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) ok |= (key == a);
    if (!ok) throw UnknownKeyError(path.empty() ? key : path + "." + key);
  }
}

inline const json* maybe(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline std::string get_string(const json& obj, const std::string& path, const char* key,
                              std::string fallback) {
  const json* v = maybe(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) throw SpecError(path + "." + key + " must be a string");
  return v->get<std::string>();
}

inline double get_number(const json& obj, const std::string& path, const char* key,
                         double fallback) {
  const json* v = maybe(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) throw SpecError(path + "." + key + " must be a number");
  return v->get<double>();
}

inline int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  const json* v = maybe(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw SpecError(path + "." + key + " must be an integer");
  return v->get<int>();
}

}  // namespace detail

inline nlohmann::json to_document(const ScenarioSpec& spec) {
  nlohmann::json utts = nlohmann::json::array();
  for (const auto& u : spec.utterances) {
    nlohmann::json j{{"text", u.text}};
    if (u.vacuous) {
      j["asserts"] = "vacuous";
    } else {
      j["asserts"] = {{"variable", u.asserts_variable}, {"value", u.asserts_value}};
    }
    utts.push_back(std::move(j));
  }
  return nlohmann::json{
      {"name", spec.name},
      {"agents",
       {{"listener", {{"label", spec.listener_label}, {"location", spec.listener_location}}},
        {"speaker", {{"label", spec.speaker_label}}}}},
      {"object",
       {{"label", spec.object_label},
        {"location", spec.object_location},
        {"modified", spec.object_modified}}},
      {"variables",
       {{"ability", spec.ability_variable}, {"perception", spec.perception_variable}}},
      {"priors",
       {{"ability_high", spec.ability_high_prior},
        {"perception_good", spec.perception_good_prior},
        {"modify", spec.modify_prior}}},
      {"utterances", std::move(utts)},
      {"epsilon", spec.epsilon},
      {"horizon", spec.horizon},
      {"variants",
       {{"spoken", spec.spoken_utterance},
        {"shared", {{"speaker_entry", spec.shared_entry}}},
        {"diverging", {{"speaker_entry", spec.diverging_entry}}}}},
  };
}

inline std::string serialize_spec(const ScenarioSpec& spec) {
  return to_document(spec).dump(2) + "\n";
}

inline ScenarioSpec spec_from_document(const nlohmann::json& doc) {
  using detail::get_int;
  using detail::get_number;
  using detail::get_string;
  using detail::maybe;
  using detail::reject_unknown_keys;

  if (!doc.is_object()) throw SpecError("scenario document must be a JSON object");
  reject_unknown_keys(doc, "", {"name", "agents", "object", "variables", "priors", "utterances",
                                "epsilon", "horizon", "variants"});
  ScenarioSpec spec;
  spec.name = get_string(doc, "", "name", spec.name);

  if (const auto* agents = maybe(doc, "agents")) {
    if (!agents->is_object()) throw SpecError("agents must be an object");
    reject_unknown_keys(*agents, "agents", {"listener", "speaker"});
    if (const auto* l = maybe(*agents, "listener")) {
      reject_unknown_keys(*l, "agents.listener", {"label", "location"});
      spec.listener_label = get_string(*l, "agents.listener", "label", spec.listener_label);
      spec.listener_location =
          get_string(*l, "agents.listener", "location", spec.listener_location);
    }
    if (const auto* s = maybe(*agents, "speaker")) {
      reject_unknown_keys(*s, "agents.speaker", {"label"});
      spec.speaker_label = get_string(*s, "agents.speaker", "label", spec.speaker_label);
    }
  }
  if (const auto* object = maybe(doc, "object")) {
    reject_unknown_keys(*object, "object", {"label", "location", "modified"});
    spec.object_label = get_string(*object, "object", "label", spec.object_label);
    spec.object_location = get_string(*object, "object", "location", spec.listener_location);
    if (const auto* m = maybe(*object, "modified")) {
      if (!m->is_boolean()) throw SpecError("object.modified must be a boolean");
      spec.object_modified = m->get<bool>();
    }
  } else {
    spec.object_location = spec.listener_location;
  }
  if (const auto* vars = maybe(doc, "variables")) {
    reject_unknown_keys(*vars, "variables", {"ability", "perception"});
    spec.ability_variable = get_string(*vars, "variables", "ability", spec.ability_variable);
    spec.perception_variable =
        get_string(*vars, "variables", "perception", spec.perception_variable);
  }
  if (const auto* priors = maybe(doc, "priors")) {
    reject_unknown_keys(*priors, "priors", {"ability_high", "perception_good", "modify"});
    spec.ability_high_prior =
        get_number(*priors, "priors", "ability_high", spec.ability_high_prior);
    spec.perception_good_prior =
        get_number(*priors, "priors", "perception_good", spec.perception_good_prior);
    spec.modify_prior = get_number(*priors, "priors", "modify", spec.modify_prior);
  }
  if (const auto* utts = maybe(doc, "utterances")) {
    if (!utts->is_array()) throw SpecError("utterances must be an array");
    spec.utterances.clear();
    std::size_t i = 0;
    for (const auto& u : *utts) {
      std::string path = "utterances[" + std::to_string(i++) + "]";
      if (!u.is_object()) throw SpecError(path + " must be an object");
      reject_unknown_keys(u, path, {"text", "asserts"});
      UtteranceSpec us;
      us.text = get_string(u, path, "text", "");
      const auto* asserts = maybe(u, "asserts");
      if (!asserts) throw SpecError(path + ".asserts is required");
      if (asserts->is_string()) {
        if (asserts->get<std::string>() != "vacuous") {
          throw SpecError(path + ".asserts must be \"vacuous\" or an object");
        }
        us.vacuous = true;
      } else if (asserts->is_object()) {
        reject_unknown_keys(*asserts, path + ".asserts", {"variable", "value"});
        us.asserts_variable = get_string(*asserts, path + ".asserts", "variable", "");
        us.asserts_value = get_string(*asserts, path + ".asserts", "value", "");
      } else {
        throw SpecError(path + ".asserts must be \"vacuous\" or an object");
      }
      spec.utterances.push_back(std::move(us));
    }
  } else {
    // Default utterances assert the configured perception variable.
    for (auto& u : spec.utterances) {
      if (!u.vacuous) u.asserts_variable = spec.perception_variable;
    }
  }
  spec.epsilon = get_number(doc, "", "epsilon", spec.epsilon);
  spec.horizon = get_int(doc, "", "horizon", spec.horizon);
  if (const auto* variants = maybe(doc, "variants")) {
    reject_unknown_keys(*variants, "variants", {"spoken", "shared", "diverging"});
    spec.spoken_utterance = get_string(*variants, "variants", "spoken", spec.spoken_utterance);
    if (const auto* sh = maybe(*variants, "shared")) {
      reject_unknown_keys(*sh, "variants.shared", {"speaker_entry"});
      spec.shared_entry = get_string(*sh, "variants.shared", "speaker_entry", spec.shared_entry);
    }
    if (const auto* dv = maybe(*variants, "diverging")) {
      reject_unknown_keys(*dv, "variants.diverging", {"speaker_entry"});
      spec.diverging_entry =
          get_string(*dv, "variants.diverging", "speaker_entry", spec.diverging_entry);
    }
  }
  if (spec.shared_entry != "arrive_early" || spec.diverging_entry != "arrive_late") {
    throw SpecError("variants.*.speaker_entry must be arrive_early (shared) / arrive_late (diverging)");
  }
  validate_spec(spec);
  return spec;
}

inline ScenarioSpec parse_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("scenario document is not valid JSON: ") + e.what());
  }
  return spec_from_document(doc);
}

}  // namespace fauxpas
