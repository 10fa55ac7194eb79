// Acceptance runner: one PASS/FAIL/SKIP line per criterion.
//   test_acceptance [--quick] [--jobs N] [--seed S] [--artifacts DIR]
// --quick skips the criteria that train networks at full size.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "frontier_lab/acceptance.hpp"
#include "frontier_lab/runner.hpp"
#include "frontier_lab/worker_pool.hpp"

using namespace frontier_lab;

int main(int argc, char** argv) {
  CLI::App app{"frontier-lab acceptance criteria"};
  bool quick = false;
  unsigned jobs = 0;
  std::uint64_t seed = resolve_root_seed(Config::defaults());
  std::string artifacts;
  app.add_flag("--quick", quick, "skip full-size network training");
  app.add_option("--jobs", jobs, "worker threads (default: available cores)");
  app.add_option("--seed", seed, "root seed");
  app.add_option("--artifacts", artifacts, "directory for sweep CSVs and profiles");
  CLI11_PARSE(app, argc, argv);
  if (jobs == 0) jobs = default_jobs();

  AcceptanceOptions opt;
  opt.quick = quick;
  opt.jobs = jobs;
  opt.root_seed = seed;
  if (!artifacts.empty()) opt.artifact_dir = artifacts;
  opt.log = [](const std::string& line) { std::cerr << "  " << line << "\n"; };

  std::size_t failed = 0;
  const auto report = [&](const CheckResult& r) {
    failed += r.status == CheckStatus::fail;
    std::cout << format_result_line(r) << std::endl;
  };
  run_acceptance(opt, report);

  const auto scratch = std::filesystem::temp_directory_path() / "frontier_lab_acceptance_determinism";
  std::filesystem::remove_all(scratch);
  Config config = Config::defaults();
  config.set("run.seed", static_cast<double>(seed));
  report(determinism_check(config, jobs, scratch));
  std::filesystem::remove_all(scratch);

  std::cout << (failed == 0 ? "ALL CRITERIA PASSED" : std::to_string(failed) + " CRITERIA FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
