#pragma once
// Experiment registry: name -> defaults and runner.

#include "algdist/harness/suites_bezout.hpp"
#include "algdist/harness/suites_exact.hpp"
#include "algdist/harness/suites_fit.hpp"
#include "algdist/harness/suites_geometry.hpp"
#include "algdist/harness/suites_jet.hpp"

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace algdist {

struct ExperimentEntry {
  std::string name;
  std::function<void(ExperimentConfig&)> defaults;
  std::function<Report(const ExperimentConfig&, int)> run;
};

inline const std::vector<ExperimentEntry>& experiments() {
  using namespace suites;
  auto bezout = [](BezoutVariant v) { return [v](const ExperimentConfig& c, int j) { return run_bezout(v, c, j); }; };
  static const std::vector<ExperimentEntry> all = {
      {"lemma-hilf", hilf_defaults, run_lemma_hilf},
      {"lemma-hilfzwei", hilfzwei_defaults, run_hilfzwei},
      {"lemma-hilfdrei", hilfdrei_defaults, run_hilfdrei},
      {"jpabsch", jpabsch_defaults, run_jpabsch},
      {"comb", comb_defaults, run_comb},
      {"hypeb", fit_grid_defaults, run_hypeb},
      {"main2", fit_grid_defaults, run_main2},
      {"zerl", zerl_defaults, run_zerl},
      {"raumabl", fit_grid_defaults, run_raumabl},
      {"trfunk0", trfunk0_defaults, run_trfunk0},
      {"tube", tube_defaults, run_tube},
      {"pf-far-subspace", pf_defaults, run_pf_far_subspace},
      {"dmbt1", bezout_defaults, bezout(BezoutVariant::dmbt1)},
      {"cor2", bezout_defaults, bezout(BezoutVariant::cor2)},
      {"cor4", bezout_defaults, bezout(BezoutVariant::cor4)},
      {"punkte", punkte_defaults, run_punkte},
  };
  return all;
}

inline const ExperimentEntry& find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (e.name == name) return e;
  throw Error(ErrorKind::config, "unknown experiment '" + name + "'");
}

// Fills unset fields with the experiment's defaults. The hash is taken after
// this, so a config with explicit defaults hashes the same as one without.
inline ExperimentConfig resolve_config(ExperimentConfig c) {
  find_experiment(c.experiment).defaults(c);
  if (c.trials < 1) throw Error(ErrorKind::config, "trials must be positive");
  return c;
}

// Accepts either a config object or a previous report. A report's embedded
// config must still hash to the value recorded next to it.
inline ExperimentConfig config_from_document(const ojson& j) {
  if (j.is_object() && j.contains("config_hash") && j.contains("config")) {
    ExperimentConfig c = config_from_json(j.at("config"));
    if (config_hash(c) != j.at("config_hash").get<std::string>())
      throw Error(ErrorKind::config, "embedded config does not match its recorded hash");
    return c;
  }
  return config_from_json(j);
}

inline ExperimentConfig config_from_text(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_document(j);
}

struct RunOptions {
  int jobs = 1;
  bool timing = false;
};

// A budget error ends the run early with the records gathered so far flagged
// incomplete; any other error propagates.
inline Report run_experiment(const ExperimentConfig& config, const RunOptions& opt = {}) {
  const ExperimentConfig c = resolve_config(config);
  const auto& entry = find_experiment(c.experiment);
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  try {
    rep = entry.run(c, std::max(opt.jobs, 1));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget) throw;
    rep = Report{};
    rep.config = c;
    rep.complete = false;
    rep.passed = false;
    rep.notes.push_back(std::string("budget exceeded: ") + e.what());
  }
  if (opt.timing) rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace algdist
