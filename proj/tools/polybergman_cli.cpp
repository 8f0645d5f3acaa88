#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bergman/acceptance.hpp"
#include "bergman/errors.hpp"
#include "bergman/experiments.hpp"
#include "bergman/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  bool deterministic = false;
  int threads = 1;
};

using Runner = std::vector<std::string> (*)(const bergman::ExperimentConfig&,
                                            const bergman::RunOptions&);

int run_experiment(const CommonArgs& args, Runner runner) {
  const auto json = bergman::load_json_file(args.config_path);
  const auto config = bergman::parse_config(json);
  bergman::RunOptions opt;
  opt.out_dir = args.out_dir;
  opt.deterministic = args.deterministic;
  opt.threads = args.threads;
  const auto files = runner(config, opt);
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polybergman: polynomial Bergman spaces, Berezin transforms, and equilibrium "
               "potentials on the plane"};
  app.set_version_flag("--version", bergman::kVersion);
  app.require_subcommand(1);

  const std::map<std::string, std::pair<std::string, Runner>> experiments = {
      {"kernel-diag",
       {"One-point function vs diagonal expansion tables", bergman::run_kernel_diag}},
      {"berezin-conc",
       {"Berezin mass escaping a droplet neighborhood", bergman::run_berezin_conc}},
      {"gaussian-tv",
       {"Total-variation distance of the rescaled density to the gaussian",
        bergman::run_gaussian_tv}},
      {"offdiag", {"Compensated off-diagonal log profiles", bergman::run_offdiag}},
      {"obstacle",
       {"Equilibrium potential and droplet via projected SOR", bergman::run_obstacle}},
      {"fock-harmonic",
       {"Berezin vs harmonic measure at exterior points (Fock)", bergman::run_fock_harmonic}},
      {"fock-moments",
       {"Principal-value and restricted Berezin moments (Fock)", bergman::run_fock_moments}},
      {"dbar-bound",
       {"Norm-minimal dbar solution against its bound", bergman::run_dbar_bound}}};

  std::map<std::string, CommonArgs> args;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : experiments) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    auto& a = args[name];
    sub->add_option("--config", a.config_path, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", a.out_dir, "output directory (overrides config)");
    sub->add_flag("--deterministic", a.deterministic,
                  "single-threaded run with the deterministic reduction order");
    sub->add_option("--threads", a.threads, "worker threads across schedule entries")
        ->check(CLI::PositiveNumber);
    subs[name] = sub;
  }

  CLI::App* accept = app.add_subcommand("accept", "Run the full acceptance suite");
  CommonArgs accept_args;
  accept->add_option("--config", accept_args.config_path, "optional accept config (out dir)")
      ->check(CLI::ExistingFile);
  accept->add_option("--out", accept_args.out_dir, "output directory");
  accept->add_flag("--deterministic", accept_args.deterministic,
                   "single-threaded run with the deterministic reduction order");
  accept->add_option("--threads", accept_args.threads, "worker threads")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [name, entry] : experiments) {
      if (subs[name]->parsed()) return run_experiment(args[name], entry.second);
    }
    if (accept->parsed()) {
      std::string out_dir = accept_args.out_dir;
      if (out_dir.empty() && !accept_args.config_path.empty()) {
        const auto json = bergman::load_json_file(accept_args.config_path);
        if (json.contains("out")) out_dir = json.at("out").get<std::string>();
      }
      if (out_dir.empty()) out_dir = "accept-results";
      return bergman::run_accept(out_dir, accept_args.deterministic, std::cout);
    }
  } catch (const bergman::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
