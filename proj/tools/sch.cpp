#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sch/commands.hpp"
#include "sch/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spectral solver and verification harness for a conserved "
               "stochastic phase-field equation"};
  app.set_version_flag("--version", std::string(sch::kVersion));
  app.require_subcommand(1);

  sch::CommandOptions opts;
  std::string axis, manifest;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "run configuration file")
        ->required();
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--paths", opts.paths, "override run.paths");
    sub->add_option("--seed", opts.seed, "override run.seed");
    sub->add_flag("--serial", opts.serial, "single-threaded reduction");
  };

  auto* sim = app.add_subcommand("simulate", "run paths, write time series");
  add_common(sim);

  auto* study = app.add_subcommand("study", "coupled refinement study");
  study->add_option("axis", axis, "refinement axis: n, dt, lambda or eps")
      ->required();
  add_common(study);

  auto* check = app.add_subcommand("check", "estimate checks");
  check->require_subcommand(1);
  auto* compat = check->add_subcommand(
      "compat", "noise/potential/mobility compatibility constants");
  add_common(compat);
  auto* energy =
      check->add_subcommand("energy", "Monte Carlo energy inequality");
  add_common(energy);
  auto* confinement = check->add_subcommand(
      "confinement", "confinement metric scaling in epsilon");
  add_common(confinement);

  auto* replay = app.add_subcommand(
      "replay", "re-run a manifest and compare output bytes");
  replay->add_option("manifest", manifest, "path to manifest.json")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return sch::run_simulate(opts);
    if (study->parsed()) return sch::run_study(axis, opts);
    if (compat->parsed()) return sch::run_check_compat(opts);
    if (energy->parsed()) return sch::run_check_energy(opts);
    if (confinement->parsed()) return sch::run_check_confinement(opts);
    if (replay->parsed()) return sch::run_replay(manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
