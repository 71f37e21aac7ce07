#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fracbound/potentials.hpp"

namespace fracbound {

struct PotentialSpec {
  std::vector<PotentialKind> terms;  // summed; empty means V ≡ 0 unless file is set
  std::string file;                  // sample file in the "# d L N" format
};

struct ExperimentConfig {
  std::string mode;  // count | verify | sweep | quasinorm | cwikel | selftest
  int d = 1;
  double s = 1.0;
  double eps = 0.01;
  double delta = 0.1;
  double L = 20.0;
  int N = 256;
  PotentialSpec potential;
  std::vector<double> energies;  // empty selects default_energies()
  std::vector<double> lambdas{1.0};
  double E = -0.01;              // energy for trace / weak-norm quantities
  int hermite_M = 0;
  std::vector<std::string> theorems;          // verify mode; empty selects all applicable
  std::map<std::string, double> constants;    // report_class -> C for verify mode
  double pp = 1.8;                            // cwikel exponent p'
  std::string symbol = "gaussian";            // cwikel symbol: gaussian | radial-power
  double symbol_width = 1.0;
  int selftest_cases = 200;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
};

// YAML (or JSON) text; throws Error(ConfigInvalid) on malformed input.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
void validate(const ExperimentConfig& c);

// Applies "N=.. L=.." style overrides.
void apply_grid_override(ExperimentConfig& c, const std::string& spec);

// Runs one experiment, writing summary.json, reports.csv and curves/*.tsv
// under c.out_dir. Returns the process exit status (0 ok, 1 violation).
int run_config(const ExperimentConfig& c);

}  // namespace fracbound
