#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracbound/config.hpp"
#include "fracbound/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bound-state counting and Cwikel-type estimates for fractional Schrödinger operators"};
  std::string mode, config_path, out_dir, grid;
  std::uint64_t seed = 0;
  app.add_option("mode", mode, "count | verify | sweep | quasinorm | cwikel | selftest (overrides the config)");
  app.add_option("--config", config_path, "experiment file (YAML or JSON)");
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized property tests");
  app.add_option("--grid", grid, "grid overrides, e.g. \"N=512 L=40\"");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    fracbound::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = fracbound::parse_config_file(config_path);
    if (!mode.empty()) cfg.mode = mode;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (*seed_opt) cfg.seed = seed;
    if (!grid.empty()) fracbound::apply_grid_override(cfg, grid);
    fracbound::validate(cfg);
    return fracbound::run_config(cfg);
  } catch (const fracbound::Error& e) {
    std::cerr << "fracbound: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fracbound: " << e.what() << '\n';
    return 3;
  }
}
