#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sprice/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spatial pricing solvers: whole-region, subregion and two-seller games"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir;
  std::vector<std::string> methods;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string format = "structured";

  auto* run = app.add_subcommand("run", "solve a scenario and write a result bundle");
  run->add_option("--scenario", scenario, "scenario file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--method", methods, "solver to use instead of the scenario's")->expected(0, 1);
  auto* run_seed = run->add_option("--seed", seed, "multistart seed");
  auto* run_threads = run->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  run->add_option("--format", format, "bundle format")
      ->check(CLI::IsMember({"structured", "csv"}));

  auto* cmp = app.add_subcommand("compare", "run several methods on one scenario");
  cmp->add_option("--scenario", scenario, "scenario file (JSON)")->required();
  cmp->add_option("--method", methods, "methods to compare (repeat or comma-separate)")
      ->delimiter(',');
  cmp->add_option("--out", out_dir, "directory for compare.csv");
  auto* cmp_seed = cmp->add_option("--seed", seed, "multistart seed");
  auto* cmp_threads = cmp->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);

  std::string result;
  auto* chk = app.add_subcommand("check", "re-validate a result bundle against its scenario");
  chk->add_option("--scenario", scenario, "scenario file (JSON)")->required();
  chk->add_option("--result", result, "result.json written by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sprice::kExitValidation;
  }

  sprice::RunOptions opts;
  opts.format = format == "csv" ? sprice::OutputFormat::Csv : sprice::OutputFormat::Structured;
  if (*run_seed || *cmp_seed) opts.seed = seed;
  if (*run_threads || *cmp_threads) opts.threads = threads;

  if (*run) {
    if (!methods.empty()) opts.method = methods.front();
    return sprice::run_command(scenario, out_dir, opts, std::cout, std::cerr);
  }
  if (*cmp) {
    return sprice::compare_command(scenario, methods, opts,
                                   out_dir.empty() ? std::nullopt : std::optional(out_dir),
                                   std::cout, std::cerr);
  }
  return sprice::check_command(scenario, result, std::cout, std::cerr);
}
