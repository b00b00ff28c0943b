// algdist <experiment> [--config path] [--seed N] [--trials N] [--out report.json]
//         [--csv table.csv] [--jobs N] [--timing]
//
// The config may also be a previous report; its embedded config is re-run
// after checking the recorded hash. Exit status: 0 passed, 1 failed, 2 error.

#include "algdist/harness/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace algdist;

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_text(text.str());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::config, "cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run an algebraic-distance verification experiment"};
  std::string experiment, config_path, out_path, csv_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int jobs = 1;
  bool timing = false, list = false;
  app.add_option("experiment", experiment, "experiment name");
  app.add_option("--config", config_path, "JSON config or previous report");
  app.add_option("--seed", seed, "override the master seed");
  app.add_option("--trials", trials, "override the trial count")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "also write a per-cell CSV table");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--timing", timing, "record wall time in the report (breaks byte reproducibility)");
  app.add_flag("--list", list, "list experiment names");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& e : experiments()) std::cout << e.name << "\n";
    return 0;
  }
  try {
    if (experiment.empty()) throw Error(ErrorKind::config, "missing experiment name");
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
      if (cfg.experiment != experiment)
        throw Error(ErrorKind::config, "config is for '" + cfg.experiment + "', not '" + experiment + "'");
    } else {
      cfg.experiment = experiment;
    }
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;

    const Report rep = run_experiment(cfg, {jobs, timing});
    const std::string text = report_text(rep);
    if (out_path.empty())
      std::cout << text;
    else
      write_file(out_path, text);
    if (!csv_path.empty()) write_file(csv_path, report_csv(rep));
    std::cerr << rep.config.experiment << ": " << (rep.passed ? "passed" : "FAILED") << " (" << rep.total_passes() << "/"
              << rep.total_trials() << " trials, " << config_hash(rep.config) << ")\n";
    return rep.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
