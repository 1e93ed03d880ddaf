// Command-line front end: one experiment per invocation.
#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include "elbm/config.hpp"
#include "elbm/errors.hpp"
#include "elbm/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kDivergence = 3, kIo = 4, kOther = 1 };

struct Verb {
  const char* name;
  const char* help;
  elbm::ExperimentKind fallback;
  std::vector<elbm::ExperimentKind> accepts;  // empty: any experiment
};

}  // namespace

int main(int argc, char** argv) {
  using elbm::ExperimentKind;
  const std::vector<Verb> verbs{
      {"simulate", "Run the experiment named in the config (LBM run by default)",
       ExperimentKind::Simulate, {}},
      {"oracle", "Spectral reference solution, alone or compared with the LBM",
       ExperimentKind::Oracle, {ExperimentKind::Oracle, ExperimentKind::BulkCompare}},
      {"stability", "Von Neumann stability map", ExperimentKind::StabilityMap,
       {ExperimentKind::StabilityMap}},
      {"convergence", "Grid convergence sweep against the oracle", ExperimentKind::Convergence,
       {ExperimentKind::Convergence}},
      {"rayleigh", "Surface-wave speed and depth profile", ExperimentKind::Rayleigh,
       {ExperimentKind::Rayleigh}},
      {"reflect", "Rigid and free boundary reflection tests", ExperimentKind::Reflection,
       {ExperimentKind::Reflection}},
  };

  CLI::App app{"Lattice Boltzmann elastic wave solver"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int workers = 1;
  long seed = 0;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    sub->add_option("--config", config_path, "Config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides run.output)");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Reserved; runs are deterministic");
  }
  CLI11_PARSE(app, argc, argv);

  const auto* chosen = &verbs.front();
  for (const auto& v : verbs)
    if (app.got_subcommand(v.name)) chosen = &v;

  try {
    elbm::RunConfig cfg = config_path.empty() ? elbm::parse_config("", chosen->fallback)
                                              : elbm::load_config(config_path, chosen->fallback);
    if (!chosen->accepts.empty() &&
        std::find(chosen->accepts.begin(), chosen->accepts.end(), cfg.experiment) ==
            chosen->accepts.end())
      throw elbm::ConfigError({"run.experiment '" + std::string(to_string(cfg.experiment)) +
                               "' cannot run under '" + chosen->name + "'"});
    if (!out_dir.empty()) cfg.output = out_dir;
    const auto summary = elbm::run_experiment(cfg, cfg.output, workers);
    std::cout << summary["results"].dump(2) << '\n';
    return kOk;
  } catch (const elbm::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
    return kConfig;
  } catch (const elbm::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const elbm::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
