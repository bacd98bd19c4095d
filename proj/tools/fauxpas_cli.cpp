#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fauxpas/oracle.hpp"
#include "fauxpas/report.hpp"

using namespace fauxpas;

namespace {

struct RunOptions {
  std::string scenario = "curtain";
  std::string variant = "both";
  std::string format = "table";
  std::optional<double> epsilon;
  std::optional<double> rationality;
  std::optional<double> theta_info;
  std::optional<double> theta_eval;
  std::optional<double> benign_prior;
  std::optional<double> harm_weight;
  std::size_t history_cap = kDefaultHistoryCap;
  double classification_tolerance = kClassificationTolerance;
  std::uint64_t seed = 0;
  bool oracle = false;
};

struct LoadedScenario {
  ScenarioSpec spec;
  std::string source;
};

LoadedScenario load_scenario(const std::string& ref) {
  if (auto preset = find_preset(ref)) {
    return {*preset, "preset:" + preset->name};
  }
  std::filesystem::path path(ref);
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot read scenario file: " + ref);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return {parse_spec(buffer.str()), "file:" + ref};
  }
  throw SpecError("unknown scenario '" + ref + "': not a preset and no such file");
}

std::vector<HistoryVariant> requested_variants(const std::string& variant) {
  if (variant == "both") return {HistoryVariant::shared, HistoryVariant::diverging};
  return {parse_variant(variant)};
}

nlohmann::json effective_config(const RunOptions& o, const LoadedScenario& loaded,
                                const ScenarioSpec& spec, const SpeakerParams& params,
                                const std::vector<SpeakerHypothesis>& hyps) {
  nlohmann::json hypotheses = nlohmann::json::array();
  for (const auto& h : hyps) {
    hypotheses.push_back({{"label", h.label},
                          {"prior", h.prior},
                          {"theta_info", h.params.theta_info},
                          {"theta_eval", h.params.theta_eval},
                          {"rationality", h.params.rationality}});
  }
  return nlohmann::json{
      {"scenario", loaded.source},
      {"variant", o.variant},
      {"format", o.format},
      {"epsilon", spec.epsilon},
      {"rationality", params.rationality},
      {"theta_info", params.theta_info},
      {"theta_eval", params.theta_eval},
      {"hypotheses", std::move(hypotheses)},
      {"history_cap", o.history_cap},
      {"classification_tolerance", o.classification_tolerance},
      {"seed", o.seed},
      {"oracle", o.oracle},
      {"scenario_spec", to_document(spec)},
  };
}

int run_command(const RunOptions& o) {
  LoadedScenario loaded = load_scenario(o.scenario);
  ScenarioSpec spec = loaded.spec;
  if (o.epsilon) spec.epsilon = *o.epsilon;

  SpeakerParams params = default_speaker_params(spec);
  if (o.rationality) params.rationality = *o.rationality;
  if (o.theta_info) params.theta_info = *o.theta_info;
  if (o.theta_eval) params.theta_eval = *o.theta_eval;

  std::vector<SpeakerHypothesis> hyps = default_hypotheses(spec);
  for (auto& h : hyps) {
    if (o.rationality) h.params.rationality = *o.rationality;
    if (o.theta_info) h.params.theta_info = *o.theta_info;
  }
  if (o.benign_prior) {
    hyps.at(0).prior = *o.benign_prior;
    hyps.at(1).prior = 1.0 - *o.benign_prior;
  }
  if (o.harm_weight) hyps.at(1).params.theta_eval = *o.harm_weight;

  ProfileOptions opts{o.history_cap, o.classification_tolerance};
  nlohmann::json config = effective_config(o, loaded, spec, params, hyps);
  std::cerr << "config: " << config.dump() << "\n";

  std::vector<HistoryVariant> variants = requested_variants(o.variant);
  std::vector<PredictionProfile> profiles;
  nlohmann::json results;
  if (o.variant == "both") {
    VariantComparison c = compare_variants(spec, params, hyps, opts);
    profiles = {c.shared, c.diverging};
    results = emit_comparison(c);
    if (o.format == "table") {
      std::cout << render_contrast_table(c);
    }
  } else {
    profiles = {prediction_profile(spec, variants.front(), params, hyps, opts)};
    results = emit_profile(profiles.front());
    if (o.format == "table") {
      std::cout << render_table(profiles);
      std::cout << "signatures: " << profiles.front().variant << " -> "
                << signature_label(profiles.front()) << "\n";
    }
  }

  std::optional<double> deviation;
  if (o.oracle) {
    double worst = 0.0;
    for (std::size_t i = 0; i < variants.size(); ++i) {
      auto ref = oracle::profile(spec, variants[i], hyps);
      for (const auto& f : profile_fields()) {
        worst = std::max(worst, std::abs(profiles[i].*(f.member) - ref.at(f.name)));
      }
    }
    deviation = worst;
  }

  if (o.format == "csv") {
    std::cout << render_csv(profiles);
  } else if (o.format == "structured") {
    nlohmann::json doc{{"config", std::move(config)}, {"results", std::move(results)}};
    if (deviation) doc["oracle_max_abs_deviation"] = *deviation;
    std::cout << doc.dump(2) << "\n";
  }
  if (deviation && o.format != "structured") {
    auto& out = o.format == "table" ? std::cout : std::cerr;
    out << "oracle max abs deviation: " << format_number(*deviation) << "\n";
  }
  return 0;
}

int list_command(const std::string& dir) {
  for (const auto& p : bundled_presets()) {
    std::cout << p.name << "  [preset]  " << p.speaker_label << " comments on "
              << p.listener_label << "'s " << p.object_label << "\n";
  }
  if (dir.empty()) return 0;
  if (!std::filesystem::is_directory(dir)) {
    throw SpecError("not a directory: " + dir);
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    try {
      LoadedScenario loaded = load_scenario(file.string());
      std::cout << loaded.spec.name << "  [file]  " << file.string() << "\n";
    } catch (const SpecError& e) {
      std::cout << file.string() << "  [invalid]  " << e.what() << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact two-agent belief engine: what an utterance does to its hearer,\n"
               "what the speaker expected it to do, and what the hearer concludes\n"
               "about the speaker."};
  app.require_subcommand(1);

  RunOptions o;
  CLI::App* run = app.add_subcommand("run", "Compute prediction profiles for a scenario");
  run->add_option("--scenario", o.scenario, "Preset name or path to a scenario JSON document")
      ->capture_default_str();
  run->add_option("--variant", o.variant, "Which history variant to run")
      ->check(CLI::IsMember({"shared", "diverging", "both"}))
      ->capture_default_str();
  run->add_option("--format", o.format, "Output format on stdout")
      ->check(CLI::IsMember({"table", "csv", "structured"}))
      ->capture_default_str();
  run->add_option("--epsilon", o.epsilon, "Semantic noise rate override");
  run->add_option("--rationality", o.rationality,
                  "Choice-rule sharpness override (speaker and all hypotheses)");
  run->add_option("--theta-info", o.theta_info, "Speaker informative goal weight override");
  run->add_option("--theta-eval", o.theta_eval, "Speaker evaluative goal weight override");
  run->add_option("--benign-prior", o.benign_prior,
                  "Prior mass of the benign hypothesis (the harmful one gets the rest)");
  run->add_option("--harm-weight", o.harm_weight,
                  "Evaluative goal weight of the harmful hypothesis");
  run->add_option("--history-cap", o.history_cap,
                  "Abort if enumeration would exceed this many histories")
      ->capture_default_str();
  run->add_option("--classification-tolerance", o.classification_tolerance,
                  "Band around zero for the faux pas / expected insult flags")
      ->capture_default_str();
  run->add_option("--seed", o.seed,
                  "Reserved for future stochastic features; exact runs ignore it")
      ->capture_default_str();
  run->add_flag("--oracle", o.oracle,
                "Also run the brute-force reference and report the largest deviation");

  std::string dir;
  CLI::App* list = app.add_subcommand("list", "List bundled presets and user scenarios");
  list->add_option("--dir", dir, "Directory to scan for user scenario *.json documents");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(o);
    return list_command(dir);
  } catch (const ZeroPosteriorError& e) {
    std::cerr << "error (zero posterior): " << e.what() << "\n";
    return 3;
  } catch (const ExplosionGuardError& e) {
    std::cerr << "error (explosion guard, cap " << e.cap() << "): " << e.what() << "\n";
    return 4;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
