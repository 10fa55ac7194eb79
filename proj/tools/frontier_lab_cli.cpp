#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frontier_lab/errors.hpp"
#include "frontier_lab/runner.hpp"

using namespace frontier_lab;

int main(int argc, char** argv) {
  CLI::App app{"Frontier lab: pattern-frontier scaling experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  unsigned jobs = 0;
  std::string out_dir;

  const std::map<std::string, std::string> blurbs{
      {"analytic", "coverage and dynamics sweeps with log-log fits"},
      {"nn-sweep", "train the bottleneck network over an N, D or tau grid"},
      {"dln", "deep linear network flows and beta recovery"},
      {"plan", "compute-allocation tables"},
      {"verify", "run the acceptance checks and print a pass/fail table"},
  };
  for (const auto& name : command_names()) {
    const auto it = blurbs.find(name);
    auto* sub = app.add_subcommand(name, it == blurbs.end() ? std::string{} : it->second);
    sub->add_option("--config", config_path, "TOML-style config file");
    sub->add_option("--jobs", jobs, "worker threads (default: available cores)");
    sub->add_option("--out", out_dir, "exact run directory (default: <run.out_dir>/<timestamp>-<command>)");
    sub->add_option("overrides", overrides, "section.key=value overrides");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunRequest req;
    req.command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) req.config.merge_file(config_path);
    for (const auto& o : overrides) req.config.apply_override(o);
    if (jobs > 0) req.jobs = jobs;
    if (!out_dir.empty()) req.run_dir = out_dir;
    const auto outcome = run_command(req, std::cout);
    std::cout << "artifacts: " << outcome.run_dir.string() << "\n";
    return outcome.exit_code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
