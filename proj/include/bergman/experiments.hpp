#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bergman/numerics.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Degree schedule n = n(m): either round(m tau) or round(m tau) + M.
struct NRule {
  std::string kind = "round_m_tau";  // "round_m_tau" | "m_tau_plus_M"
  double M = 0.0;
  int n_for(double m, double tau) const;
};

struct QuadratureParams {
  double r_max = 0.0;  // 0 -> per-basis default
  int n_radial = 0;
  int n_angular = 0;
};

/// Shared experiment configuration, parsed and validated from JSON.
struct ExperimentConfig {
  nlohmann::json weight_descriptor = {{"kind", "fock"}};
  double tau = 1.0;
  std::vector<double> m_schedule = {16.0, 32.0, 64.0};
  NRule n_rule;
  std::vector<cd> z0_list = {cd{0.0, 0.0}};
  QuadratureParams quadrature;
  std::string out_dir = "results";
  std::uint64_t seed = 20240811;
  nlohmann::json raw;  // subcommand-specific extras
};

/// Throws ConfigError carrying the offending field path.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json load_json_file(const std::string& path);

struct RunOptions {
  std::string out_dir;        // overrides config.out_dir when nonempty
  bool deterministic = false; // recorded in metadata; forces threads = 1
  int threads = 1;
};

/// FNV-1a of the canonical (sorted-key) config dump.
std::uint64_t config_hash(const nlohmann::json& j);

/// write-temp-rename; creates parent directories.
void write_atomic(const std::string& path, const std::string& content);

std::string format17(double v);

/// Runners for the CLI subcommands. Each returns the files it wrote.
std::vector<std::string> run_kernel_diag(const ExperimentConfig&, const RunOptions&);
std::vector<std::string> run_berezin_conc(const ExperimentConfig&, const RunOptions&);
std::vector<std::string> run_gaussian_tv(const ExperimentConfig&, const RunOptions&);
std::vector<std::string> run_offdiag(const ExperimentConfig&, const RunOptions&);
std::vector<std::string> run_obstacle(const ExperimentConfig&, const RunOptions&);
std::vector<std::string> run_fock_harmonic(const ExperimentConfig&, const RunOptions&);
std::vector<std::string> run_fock_moments(const ExperimentConfig&, const RunOptions&);
std::vector<std::string> run_dbar_bound(const ExperimentConfig&, const RunOptions&);

}  // namespace bergman
