// SPDX-License-Identifier: Apache-2.0
//
// Experiment driver CLI: generates hypothesis-satisfying data, runs the
// identity checkers, and emits machine-readable JSON reports.
//
//   divcurl run  --experiment E2 --n 2 --m 2 --nx 16 --ny 16 --p 2 \
//                --trials 20 --seed 42 --alpha 1.5 --out report.json
//   divcurl scan --experiment E1 --extents 8,16,32 ...
//   divcurl check-identities --fields fields.json
//
// Exit codes: 0 success, 1 usage error, 2 identity violation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "divcurl/harness.hpp"

namespace {

struct CliOptions {
  std::string experiment = "E1";
  int n = 2, m = 0, nx = 16, ny = 0;
  double p = 2.0;
  int trials = 10;
  std::uint64_t seed = 0;
  double alpha = 0;
  int threads = 1;
  std::string out;
  std::string config_path;
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; CLI flags override");
  cmd->add_option("--experiment", o.experiment, "experiment id (E1..E6 or full name)");
  cmd->add_option("--n", o.n, "x-parameter dimension count");
  cmd->add_option("--m", o.m, "y-parameter dimension count (0: same as n)");
  cmd->add_option("--nx", o.nx, "grid points per x-axis");
  cmd->add_option("--ny", o.ny, "grid points per y-axis (0: same as nx)");
  cmd->add_option("--p", o.p, "Lebesgue exponent p in (1,inf); q is conjugate");
  cmd->add_option("--trials", o.trials, "number of trials");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--alpha", o.alpha, "spectral decay exponent (0: default)");
  cmd->add_option("--threads", o.threads, "parallel trial execution");
  cmd->add_option("--out", o.out, "report output path (default stdout)");
}

divcurl::ExperimentConfig build_config(const CliOptions& o, const CLI::App* cmd) {
  divcurl::ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + o.config_path);
    nlohmann::json j;
    is >> j;
    cfg = divcurl::config_from_json(j);
  }
  auto set = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (o.config_path.empty() || set("--experiment"))
    cfg.experiment = divcurl::experiment_from_string(o.experiment);
  if (o.config_path.empty() || set("--n")) cfg.n = o.n;
  if (o.config_path.empty() || set("--m")) cfg.m = o.m;
  if (o.config_path.empty() || set("--nx")) cfg.nx = o.nx;
  if (o.config_path.empty() || set("--ny")) cfg.ny = o.ny;
  if (o.config_path.empty() || set("--p")) cfg.p = o.p;
  if (o.config_path.empty() || set("--trials")) cfg.trials = o.trials;
  if (o.config_path.empty() || set("--seed")) cfg.seed = o.seed;
  if (o.config_path.empty() || set("--alpha")) cfg.alpha = o.alpha;
  if (o.config_path.empty() || set("--threads")) cfg.threads = o.threads;
  if (set("--out")) cfg.out_path = o.out;
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << text;
  }
}

std::vector<int> parse_extents(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw CLI::ValidationError("--extents", "empty extent list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divcurl: numerical monitor for multi-parameter div-curl inequalities"};
  app.require_subcommand(1);

  CliOptions opts;
  std::string extents_csv = "8,16,32";
  std::string fields_path;

  CLI::App* run = app.add_subcommand("run", "run one experiment and write a report");
  add_common_options(run, opts);

  CLI::App* scan = app.add_subcommand("scan", "repeat an experiment over grid extents");
  add_common_options(scan, opts);
  scan->add_option("--extents", extents_csv, "comma-separated ascending extent list");

  CLI::App* check = app.add_subcommand("check-identities",
                                       "run the identity checkers on a field file");
  check->add_option("--fields", fields_path, "field file (JSON)")->required();
  check->add_option("--out", opts.out, "residual report output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      divcurl::ExperimentConfig cfg = build_config(opts, run);
      divcurl::ExperimentReport report = divcurl::run_experiment(cfg);
      emit(report.dump(), cfg.out_path);
    } else if (scan->parsed()) {
      divcurl::ExperimentConfig cfg = build_config(opts, scan);
      divcurl::ScanResult result = divcurl::scaling_scan(cfg, parse_extents(extents_csv));
      emit(result.to_json(cfg).dump(2) + "\n", cfg.out_path);
    } else if (check->parsed()) {
      divcurl::FieldFile ff = divcurl::read_field_file(fields_path);
      auto [residuals, ok] = divcurl::check_identities(ff);
      residuals["ok"] = ok;
      emit(residuals.dump(2) + "\n", opts.out);
      if (!ok) return 2;
    }
  } catch (const divcurl::IdentityViolation& e) {
    std::cerr << "identity violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
