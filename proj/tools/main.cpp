#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qs1d/config.hpp"
#include "qs1d/errors.hpp"
#include "qs1d/runner.hpp"
#include "qs1d/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitDefect = 4;

int do_run(const std::string& config_path, const std::string& out_override,
           int threads) {
  qs1d::RunConfig cfg;
  try {
    cfg = qs1d::load_config_file(config_path);
  } catch (const qs1d::Error& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  }

  qs1d::ResultTable table;
  try {
    table = qs1d::run(cfg, threads);
  } catch (const qs1d::Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitNumerical;
  }

  const std::string csv = table.to_csv();
  const std::string out_path =
      !out_override.empty() ? out_override : cfg.out_path.value_or("");
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return kExitNumerical;
    }
    out << csv;
  }

  if (table.error) {
    std::cerr << "error at sweep index " << table.error_index << ": "
              << *table.error << "\n";
    return kExitNumerical;
  }
  if (!table.defects_ok()) {
    std::cerr << "oracle defect " << table.max_defect << " exceeds tolerance "
              << table.defect_tol << "\n";
    return kExitDefect;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D quantum scattering laboratory: partial densities of states, "
               "Larmor-clock times, and mesoscopic transport sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int threads = 1;
  auto* run_cmd = app.add_subcommand("run", "execute a sweep configuration");
  run_cmd->add_option("config", config_path, "path to the run configuration")
      ->required();
  run_cmd->add_option("--out", out_path, "output CSV path (default from config)");
  run_cmd->add_option("--threads", threads, "worker threads for sweep points");

  std::uint64_t seed = 1;
  int count = 50;
  auto* self_cmd =
      app.add_subcommand("selftest", "run randomized invariant suites");
  self_cmd->add_option("--seed", seed, "RNG seed for profile generation");
  self_cmd->add_option("--count", count, "profiles per suite");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    return do_run(config_path, out_path, threads);
  }
  const auto report = qs1d::run_selftest(seed, count, std::cout);
  if (!report.all_passed()) {
    std::cerr << report.total_failed() << " selftest case(s) failed\n";
    return kExitDefect;
  }
  std::cout << "all selftest suites passed\n";
  return kExitOk;
}
