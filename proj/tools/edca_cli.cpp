// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "edca/edca.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-AC EDCA model: analytic fixed point and slot-level simulation"};
  std::string config_path, out_path, mode_name = "analytic", trace_path;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  bool oracle = false, quiet = false, no_uniqueness = false;

  app.add_option("--config", config_path, "Scenario document (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--mode", mode_name, "analytic, sim or both")
      ->check(CLI::IsMember({"analytic", "sim", "both"}));
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_flag("--oracle", oracle, "Solve AC chains with the sparse stationary solver");
  auto* seed_opt = app.add_option("--seed", seed, "Base seed for simulations");
  app.add_option("--trace", trace_path, "Per-slot simulation trace (CSV)");
  app.add_flag("--quiet", quiet, "Suppress progress output");
  app.add_option("--workers", workers, "Worker threads (default: EDCA_WORKERS or all cores)");
  app.add_flag("--no-uniqueness-check", no_uniqueness, "Skip the second solve from a saturated start");
  CLI11_PARSE(app, argc, argv);

  edca::BatchOptions opt;
  opt.mode = mode_name == "sim" ? edca::RunMode::sim
             : mode_name == "both" ? edca::RunMode::both
                                   : edca::RunMode::analytic;
  opt.use_oracle = oracle;
  opt.check_uniqueness = !no_uniqueness;
  if (*seed_opt) opt.seed = seed;
  opt.workers = workers;
  if (workers == 0)
    if (const char* env = std::getenv("EDCA_WORKERS")) opt.workers = static_cast<unsigned>(std::strtoul(env, nullptr, 10));

  edca::ScenarioConfig cfg;
  try {
    cfg = edca::load_config(config_path);
  } catch (const edca::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  if (cfg.n_vehicles.empty()) {
    std::cerr << "no scenarios: the N sweep is empty\n";
    return 2;
  }

  std::ofstream trace_file;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) {
      std::cerr << "cannot write " << trace_path << '\n';
      return 2;
    }
    trace_file << "slot,vehicle,ac,state\n";
    opt.trace = &trace_file;
  }

  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    out_file.open(out_path);
    if (!out_file) {
      std::cerr << "cannot write " << out_path << '\n';
      return 2;
    }
    out = &out_file;
  }

  edca::write_csv_header(*out);
  edca::BatchResult result;
  try {
    result = edca::run_batch(cfg, opt, [&](const edca::ResultRow& row) {
      edca::write_csv_row(*out, row);
      if (!quiet)
        std::fprintf(stderr, "N=%d %-8s p_col=%.4f CU=%.4f theta_o=%.4f\n", row.n, row.source.c_str(),
                     row.p_col_tot, row.channel_utilization, row.theta_hat_o);
    });
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  out->flush();
  if (result.failure) {
    std::cerr << "N=" << result.failure->n << ": " << result.failure->message << '\n';
    return 1;
  }
  return 0;
}
